#pragma once

#include "riskbound/bounds.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace riskbound {

struct FamilySup {
    double b_best = 0.0;
    double value = 0.0;
    // Largest |mean - mu| or |var - sigma^2| seen at the grid members checked.
    double moment_error = 0.0;
};

// Sup of riskmetric over one extremal family, scanned on b_grid points and
// refined by golden section around the best node. Each member is built
// explicitly and evaluated through riskmetric, never through the Lambda/Upsilon
// closed forms.
FamilySup family_sup(Family fam, const Distortion& g, const MomentInfo& m, int b_grid);

// Piecewise-linear quantile knots; repeated u marks a jump.
struct Knots {
    std::vector<double> u;
    std::vector<double> v;
};

// Random member of the shape class with exact moments (mu, sigma^2).
//   general:            increasing, jumps allowed
//   symmetric:          v(u) + v(1-u) = 2 mu
//   unimodal:           concave then convex in u (CDF convex then concave in x)
//   symmetric-unimodal: both, mode at u = 1/2
Knots random_feasible_knots(ShapeClass shape, const MomentInfo& m, std::mt19937_64& rng);

// Mean and variance of a knot quantile, exact up to rounding.
Moments knot_moments(const Knots& k);
// Discrete membership test on the knots.
bool knots_in_shape(const Knots& k, ShapeClass shape, double mu, double tol = 1e-9);

struct OracleMax {
    double value = 0.0;
    int best_trial = -1;
};

// Max riskmetric over `trials` random feasible quantiles. Deterministic in seed.
OracleMax random_feasible_max(ShapeClass shape, const Distortion& g, const MomentInfo& m, int trials,
                              std::uint64_t seed);

}  // namespace riskbound
