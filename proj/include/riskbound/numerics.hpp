#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace riskbound::numerics {

using RealFn = std::function<double(double)>;

// Integrand behaves like (distance to endpoint)^exponent near that endpoint.
// Only exponents in (-1, 1) trigger a substitution; log factors are handled
// by treating them as exponent 0.
struct SingularityHints {
    std::optional<double> lower;
    std::optional<double> upper;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

inline constexpr double kDefaultQuadTol = 1e-11;
inline constexpr std::size_t kDefaultQuadBudget = 2'000'000;

// Adaptive Gauss-Kronrod (7/15) with global subdivision. Throws NumericError
// when the budget runs out before the absolute tolerance is met.
QuadResult integrate_adaptive(const RealFn& f, double a, double b,
                              double tol = kDefaultQuadTol,
                              SingularityHints hints = {},
                              std::size_t max_evals = kDefaultQuadBudget);

// Integrand that also receives its distances to both ends of [a, b]. Under an
// endpoint substitution the distance to that end is exact, so 1 - u and the like
// can be formed without cancellation.
using AnchoredFn = std::function<double(double u, double from_lo, double from_hi)>;
QuadResult integrate_anchored(const AnchoredFn& f, double a, double b,
                              double tol = kDefaultQuadTol,
                              SingularityHints hints = {},
                              std::size_t max_evals = kDefaultQuadBudget);

// Shorthand returning only the value.
double integrate(const RealFn& f, double a, double b,
                 double tol = kDefaultQuadTol, SingularityHints hints = {});

// Brent's method. Requires a sign change on [lo, hi]; returns nullopt otherwise.
std::optional<double> brent_root(const RealFn& f, double lo, double hi,
                                 double xtol = 1e-14, int max_iter = 200);

// Every sign change of f on an n_scan grid, each refined with brent.
std::vector<double> all_roots(const RealFn& f, double lo, double hi,
                              std::size_t n_scan = 4096, double xtol = 1e-14);

struct SupOptions {
    std::size_t n_grid = 1025;
    double refine_tol = 1e-10;
    bool open_lo = false;  // f is not evaluated at lo itself
    bool open_hi = false;
};

struct SupResult {
    double argmax = 0.0;
    double value = 0.0;
    bool unbounded = false;
};

// Grid scan followed by golden-section refinement around the best grid node.
// Ties go to the smallest argument.
SupResult sup_scan(const RealFn& f, double lo, double hi, const SupOptions& opt = {});

// Golden-section maximisation on [lo, hi]; returns the argmax.
double golden_max(const RealFn& f, double lo, double hi, double tol = 1e-10);

// Special functions. beta_inc is the unregularised lower incomplete beta
// B_x(a, b) = int_0^x t^(a-1) (1-t)^(b-1) dt.
double log_gamma(double x);
double gamma_fn(double x);
double beta_fn(double a, double b);
double beta_inc_reg(double x, double a, double b);
double beta_inc(double x, double a, double b);
// Regularised P(s, x) and Q(s, x), and the unregularised gamma(s, x), Gamma(s, x).
double gamma_p(double s, double x);
double gamma_q(double s, double x);
double gamma_lower(double s, double x);
double gamma_upper(double s, double x);

}  // namespace riskbound::numerics
