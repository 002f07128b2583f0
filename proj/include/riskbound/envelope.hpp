#pragma once

#include "riskbound/distortion.hpp"
#include "riskbound/piecewise.hpp"

#include <cstddef>
#include <vector>

namespace riskbound {

inline constexpr std::size_t kDefaultHullGrid = 4096;

// Knots of a continuous piecewise linear function on [0, 1].
struct PiecewiseLinearFn {
    std::vector<double> u;
    std::vector<double> value;

    double operator()(double x) const;
    PiecewiseFn to_piecewise() const;
};

// Greatest convex minorant of f sampled on an n_grid uniform grid plus the
// breakpoints of f (each breakpoint contributes the smallest of value and limits).
PiecewiseLinearFn lower_convex_hull(const PiecewiseFn& f, std::size_t n_grid = kDefaultHullGrid);

// Convex envelope as an analytic piecewise function. Uses the attached analytic
// envelope or the convex flag when present; otherwise the grid hull is refined:
// stretches where the hull follows f keep f's formula, bridges are straight
// lines whose tangent points are solved for.
PiecewiseFn convex_envelope(const Distortion& d, std::size_t n_grid = kDefaultHullGrid);
PiecewiseFn convex_envelope(const PiecewiseFn& f, std::size_t n_grid = kDefaultHullGrid);
PiecewiseFn concave_envelope(const Distortion& d, std::size_t n_grid = kDefaultHullGrid);
PiecewiseFn concave_envelope(const PiecewiseFn& f, std::size_t n_grid = kDefaultHullGrid);

struct Atom {
    double location;
    double mass;
};

// Stieltjes measure of the right derivative of a convex function on (0, 1).
struct DerivativeMeasure {
    std::vector<Atom> atoms;
    PiecewiseFn density;  // second derivative, zero on linear stretches
    double total = 0.0;   // f'(1-) - f'(0+), may be infinite
};

DerivativeMeasure derivative_measure(const PiecewiseFn& convex_fn);

enum class AtomMode { IncludeAtoms, DensityOnly };

// int h d(measure) over (0, 1); DensityOnly drops the atoms.
double integrate_measure(const Weight& h, const DerivativeMeasure& m, AtomMode mode);

// Left-point Stieltjes sum  sum_i h(u_i) (g(u_{i+1}) - g(u_i)) on a shared grid.
double stieltjes_sum(const std::vector<double>& h, const std::vector<double>& g);

}  // namespace riskbound
