#pragma once

#include "riskbound/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace riskbound {

// coef * v^power * (-log v)^log_power with v = shift + slope * u.
// Closed under differentiation and affine reparametrisation, which covers every
// transform the engines need (hat, reflection, residual/past lifetimes).
struct Term {
    double coef = 0.0;
    double shift = 0.0;
    double slope = 1.0;
    double power = 0.0;
    double log_power = 0.0;

    double operator()(double u) const;
    // Value at anchor + off, keeping the small offset exact.
    double eval_offset(double anchor, double off) const;
    // Value given v and v - 1.
    double at(double v, double vm1) const;
    // Leading exponent in the distance to u0, or nullopt when the term is regular there.
    std::optional<double> endpoint_exponent(double u0) const;
    Term derivative_main() const;  // coef*slope*power * v^(power-1) L^k
    Term derivative_log() const;   // -coef*slope*k * v^(power-1) L^(k-1)

    static Term constant(double c) { return {c, 1.0, 0.0, 0.0, 0.0}; }
    static Term monomial(double c, double k) { return {c, 0.0, 1.0, k, 0.0}; }
    // c * (shift + slope*u)^power
    static Term power_of(double c, double shift, double slope, double power) {
        return {c, shift, slope, power, 0.0};
    }
};

// A function on [0, 1]: analytic pieces between breakpoints plus an explicit
// value at every breakpoint (0 and 1 included). Jumps live at breakpoints.
class PiecewiseFn {
public:
    PiecewiseFn() = default;
    PiecewiseFn(std::vector<double> breaks, std::vector<std::vector<Term>> pieces,
                std::vector<double> point_values);
    // Point values default to the left limit (right limit at 0).
    PiecewiseFn(std::vector<double> breaks, std::vector<std::vector<Term>> pieces);

    static PiecewiseFn constant(double c);
    static PiecewiseFn from_terms(std::vector<Term> terms);
    // Continuous interpolant through (xs, ys); xs must run from 0 to 1.
    static PiecewiseFn linear_interpolant(std::span<const double> xs, std::span<const double> ys);

    double operator()(double u) const;
    double left_limit(double u) const;
    double right_limit(double u) const;

    std::size_t piece_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& point_values() const { return values_; }
    std::span<const Term> piece_terms(std::size_t i) const;
    double piece_lo(std::size_t i) const { return breaks_[i]; }
    double piece_hi(std::size_t i) const { return breaks_[i + 1]; }
    // Formula of piece i, ignoring breakpoint values.
    double eval_piece(std::size_t i, double u) const;
    // Same, at a point given by its distances to lo and hi; evaluates from the nearer end.
    double eval_piece_near(std::size_t i, double from_lo, double lo, double from_hi, double hi) const;
    // Piece whose interior holds u; at a breakpoint, the piece to its right.
    std::size_t piece_index(double u) const;
    // Singular exponent of piece i at one of its ends, nullopt if regular.
    std::optional<double> piece_exponent(std::size_t i, bool at_lo) const;

    // Right derivative; breakpoint values are right limits (left limit at 1).
    PiecewiseFn derivative() const;
    // u -> f(1 - u)
    PiecewiseFn reflect() const;
    // u -> f(x(u)) on the closed interval [lo, hi], zero elsewhere, where x is
    // the affine map with x(lo) = x_lo and x(hi) = x_hi.
    PiecewiseFn compose_affine(double lo, double hi, double x_lo, double x_hi) const;
    PiecewiseFn scaled(double c) const;
    PiecewiseFn plus_constant(double c) const;

    friend PiecewiseFn operator+(const PiecewiseFn& a, const PiecewiseFn& b);
    friend PiecewiseFn operator-(const PiecewiseFn& a, const PiecewiseFn& b);

    // int_a^b f(u) du, piece by piece.
    double integral(double a, double b, double tol = numerics::kDefaultQuadTol) const;

    bool is_continuous(double tol = 0.0) const;
    bool is_left_continuous(double tol = 0.0) const;
    bool is_right_continuous(double tol = 0.0) const;

private:
    void validate() const;

    std::vector<double> breaks_;
    std::vector<Term> terms_;
    std::vector<std::uint32_t> offsets_;
    std::vector<double> values_;
};

// int_a^b f(u) g(u) h(u) du over the common refinement of f and g. h is a plain
// regular weight with optional singular exponents at 0 and 1, and extra split
// points where h changes formula.
struct Weight {
    std::function<double(double u, double one_minus_u)> h;
    std::optional<double> exponent_at_0;
    std::optional<double> exponent_at_1;
    std::vector<double> splits;
};

double integrate_product(const PiecewiseFn& f, const PiecewiseFn& g, double a, double b,
                         double tol = numerics::kDefaultQuadTol);
double integrate_weighted(const PiecewiseFn& f, const Weight& w, double a, double b,
                          double tol = numerics::kDefaultQuadTol);

// Hints for a sub-interval [a, b] of piece i.
numerics::SingularityHints piece_hints(const PiecewiseFn& f, std::size_t i, double a, double b);

}  // namespace riskbound
