#pragma once

#include "riskbound/distortion.hpp"
#include "riskbound/envelope.hpp"
#include "riskbound/evaluate.hpp"
#include "riskbound/quantile.hpp"

#include <functional>
#include <optional>
#include <string>

namespace riskbound {

enum class ShapeClass { General, Unimodal, Symmetric, SymmetricUnimodal };

const char* shape_name(ShapeClass s);
ShapeClass shape_from_name(const std::string& s);

struct BoundResult {
    ShapeClass shape = ShapeClass::General;
    double lower = 0.0;
    double upper = 0.0;
    bool sharp = false;
    AtomMode mode = AtomMode::IncludeAtoms;
    // Extremal family attaining `family_value` (U and SU only).
    std::optional<double> b_star;
    std::optional<Family> family;
    double family_value = 0.0;
    // Worst-case quantile for the sharp general and symmetric bounds.
    std::optional<QuantileFn> worst_qf;
};

// Family values per unit sigma, written for the hat side of a distortion.
//   lambda_R(b) = (-(1+b^2) g(1) + 2b hat g(b) + 2 int_b^1 u d hat g) / sqrt((1-b)^3 (1/3+b))
//   lambda_L(b) = sqrt(3b/(4-3b)) g(1) + 2 sqrt3 (-b hat g(b) + int_0^b u d hat g) / sqrt(b^3 (4-3b))
//   upsilon(b)  = riskmetric of the S(b) member with mu = 0, sigma = 1
double lambda_R(const Distortion& hat_g, double b);
double lambda_L(const Distortion& hat_g, double b);
double upsilon(const Distortion& hat_g, double b);

// Theta and Delta integrals against d(hat g_*)'.
double theta(const Distortion& g, AtomMode mode);
double delta(const Distortion& g, AtomMode mode);

// Symmetric constant in its two forms:
//   hat form: (1/2) sqrt(int [(hat g(u) + hat g(1-u))_*']^2)
//   bar form: sqrt(int [(bar g^*)'(1-u)]^2)
double symmetric_constant_hat(const Distortion& g);
double symmetric_constant_bar(const Distortion& g);

BoundResult bound_general(const Distortion& g, const MomentInfo& m);
BoundResult bound_unimodal(const Distortion& g, const MomentInfo& m,
                           AtomMode mode = AtomMode::IncludeAtoms);
BoundResult bound_symmetric(const Distortion& g, const MomentInfo& m);
BoundResult bound_symmetric_unimodal(const Distortion& g, const MomentInfo& m,
                                     AtomMode mode = AtomMode::IncludeAtoms);
BoundResult compute_bound(ShapeClass shape, const Distortion& g, const MomentInfo& m,
                          AtomMode mode = AtomMode::IncludeAtoms);

// Worst-case TVaR_alpha over the shape class.
double tvar_sup(ShapeClass shape, double alpha, const MomentInfo& m);

struct WeightedBound {
    BoundResult psi_space;
    // x-space worst-case quantile, Psi^{-1} of the psi-space one, when available.
    std::function<double(double)> x_quantile;
};

// Bounds for int Psi(F^{-1}) d hat g given the mean and sd of Psi(X). Runs the
// unweighted engines on the psi-space moments.
WeightedBound bound_weighted(const Distortion& g, const WeightSpec& w, const MomentInfo& psi_moments,
                             ShapeClass shape, AtomMode mode = AtomMode::IncludeAtoms);

}  // namespace riskbound
