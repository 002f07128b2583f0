#include "riskbound/bounds.hpp"

#include "riskbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskbound {

const char* shape_name(ShapeClass s) {
    switch (s) {
    case ShapeClass::General: return "general";
    case ShapeClass::Unimodal: return "unimodal";
    case ShapeClass::Symmetric: return "symmetric";
    case ShapeClass::SymmetricUnimodal: return "symmetric-unimodal";
    }
    return "?";
}

ShapeClass shape_from_name(const std::string& s) {
    if (s == "general" || s == "G" || s == "V") return ShapeClass::General;
    if (s == "unimodal" || s == "U") return ShapeClass::Unimodal;
    if (s == "symmetric" || s == "S") return ShapeClass::Symmetric;
    if (s == "symmetric-unimodal" || s == "SU" || s == "symmetric_unimodal") return ShapeClass::SymmetricUnimodal;
    throw DomainError("unknown shape class: " + s);
}

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void check_moments(const MomentInfo& m) {
    if (!std::isfinite(m.mu) || !std::isfinite(m.sigma)) throw DomainError("moments must be finite");
    if (m.sigma < 0) throw DomainError("sigma must be non-negative");
}

double quad_tol(double len) { return 1e-14 * std::max(len, 1e-300); }

// The literal family formulas integrate u d hat g; integrating by parts against
// the continuous family quantiles gives the same numbers from plain integrals
// of hat g without cancellation near the open ends:
//   lambda_R numerator = 2 int_b^1 (g(1) u - hat g(u)) du
//   lambda_L numerator = -2 sqrt3 int_0^b hat g(u) du   (plus the g(1) term)
//   upsilon numerator  = int_b^1 (g(1) - hat g(u)) du - int_0^{1-b} hat g(u) du
struct FamilyKernel {
    double g1;
    PiecewiseFn hg;
    PiecewiseFn right;
    PiecewiseFn tail;

    explicit FamilyKernel(const Distortion& hat_g)
        : g1(hat_g.at_one()),
          hg(hat_g.fn()),
          right(PiecewiseFn::from_terms({Term::monomial(hat_g.at_one(), 1.0)}) - hat_g.fn()),
          tail(PiecewiseFn::constant(hat_g.at_one()) - hat_g.fn()) {}

    double lam_R(double b) const {
        if (!(b >= 0.0 && b < 1.0)) throw DomainError("lambda_R needs b in [0, 1)");
        const double c = 1.0 - b;
        const double num = 2.0 * right.integral(b, 1.0, quad_tol(c));
        return num / std::sqrt(c * c * c * (1.0 / 3.0 + b));
    }
    double lam_L(double b) const {
        if (!(b > 0.0 && b <= 1.0)) throw DomainError("lambda_L needs b in (0, 1]");
        const double num = -2.0 * kSqrt3 * hg.integral(0.0, b, quad_tol(b));
        return std::sqrt(3.0 * b / (4.0 - 3.0 * b)) * g1 + num / std::sqrt(b * b * b * (4.0 - 3.0 * b));
    }
    double ups(double b) const {
        if (!(b >= 0.5 && b < 1.0)) throw DomainError("upsilon needs b in [1/2, 1)");
        const double c = 1.0 - b;
        const double num = tail.integral(b, 1.0, quad_tol(c)) - hg.integral(0.0, c, quad_tol(c));
        return num / std::sqrt(2.0 / 3.0 * c * c * c);
    }
};

Weight theta_weight() {
    return Weight{[](double u, double v) {
                      return u <= 0.5 ? std::sqrt(std::max(0.0, u * (8.0 - 9.0 * u)))
                                      : std::sqrt(std::max(0.0, (9.0 * u - 1.0) * v));
                  },
                  0.5, 0.5, {0.5}};
}

Weight delta_weight() {
    return Weight{[](double u, double v) {
                      if (u <= 1.0 / 3.0) return 2.0 / 3.0 * std::sqrt(std::max(0.0, u));
                      if (u <= 2.0 / 3.0) return kSqrt3 * v * u;
                      return 2.0 / 3.0 * std::sqrt(std::max(0.0, v));
                  },
                  0.5, 0.5, {1.0 / 3.0, 2.0 / 3.0}};
}

DerivativeMeasure hat_envelope_measure(const Distortion& g) {
    return derivative_measure(convex_envelope(hat(g)));
}

BoundResult degenerate(ShapeClass shape, const Distortion& g, const MomentInfo& m, AtomMode mode) {
    BoundResult r;
    r.shape = shape;
    r.mode = mode;
    r.lower = r.upper = r.family_value = m.mu * g.at_one();
    r.sharp = true;
    return r;
}

// Envelope of k(u) = hat g(u) + hat g(1-u); convex already when hat g is.
PiecewiseFn symmetric_hat_envelope(const Distortion& g) {
    const Distortion hg = hat(g);
    PiecewiseFn k = hg.fn() + hg.fn().reflect();
    if (hg.flags().convex) return k;
    return convex_envelope(k);
}

double sq_norm(const PiecewiseFn& f) { return integrate_product(f, f, 0.0, 1.0); }

}  // namespace

double lambda_R(const Distortion& hat_g, double b) { return FamilyKernel(hat_g).lam_R(b); }
double lambda_L(const Distortion& hat_g, double b) { return FamilyKernel(hat_g).lam_L(b); }
double upsilon(const Distortion& hat_g, double b) { return FamilyKernel(hat_g).ups(b); }

double theta(const Distortion& g, AtomMode mode) {
    return integrate_measure(theta_weight(), hat_envelope_measure(g), mode);
}

double delta(const Distortion& g, AtomMode mode) {
    return integrate_measure(delta_weight(), hat_envelope_measure(g), mode);
}

double symmetric_constant_hat(const Distortion& g) {
    return 0.5 * std::sqrt(sq_norm(symmetric_hat_envelope(g).derivative()));
}

double symmetric_constant_bar(const Distortion& g) {
    const Distortion gb = symmetrize(g);
    const PiecewiseFn env = concave_envelope(gb);
    // int [(bar g^*)'(1-u)]^2 du = int [(bar g^*)'(u)]^2 du
    return std::sqrt(sq_norm(env.derivative()));
}

BoundResult bound_general(const Distortion& g, const MomentInfo& m) {
    check_moments(m);
    if (m.sigma == 0.0) return degenerate(ShapeClass::General, g, m, AtomMode::IncludeAtoms);
    const PiecewiseFn env = convex_envelope(hat(g));
    const PiecewiseFn d = env.derivative();
    const double c = env(1.0) - env(0.0);
    const double var = sq_norm(d) - c * c;
    const double k = std::sqrt(std::max(0.0, var));
    BoundResult r;
    r.shape = ShapeClass::General;
    r.lower = r.upper = r.family_value = m.mu * g.at_one() + m.sigma * k;
    r.sharp = true;
    if (usc_regularize(g).unchanged) {
        if (k > 0.0) r.worst_qf = QuantileFn(d.plus_constant(-c).scaled(m.sigma / k).plus_constant(m.mu));
    }
    return r;
}

BoundResult bound_unimodal(const Distortion& g, const MomentInfo& m, AtomMode mode) {
    check_moments(m);
    if (m.sigma == 0.0) return degenerate(ShapeClass::Unimodal, g, m, mode);
    const Distortion hg = hat(g);
    const FamilyKernel fk(hg);
    numerics::SupOptions right_opt;
    right_opt.open_hi = true;
    numerics::SupOptions left_opt;
    left_opt.open_lo = true;
    const auto sr = numerics::sup_scan([&](double b) { return fk.lam_R(b); }, 0.0, 1.0, right_opt);
    const auto sl = numerics::sup_scan([&](double b) { return fk.lam_L(b); }, 0.0, 1.0, left_opt);

    BoundResult r;
    r.shape = ShapeClass::Unimodal;
    r.mode = mode;
    const bool use_left = sl.value > sr.value || (sl.value == sr.value && sl.argmax < sr.argmax);
    const auto& best = use_left ? sl : sr;
    r.family = use_left ? Family::UL : Family::UR;
    r.b_star = best.argmax;
    r.family_value = m.mu * g.at_one() + m.sigma * best.value;
    r.lower = r.family_value;

    const DerivativeMeasure meas = hat_envelope_measure(g);
    const double th = integrate_measure(theta_weight(), meas, mode);
    r.upper = m.mu * g.at_one() + m.sigma * th / 3.0;
    const auto& fl = g.flags();
    // The hypothesis list alone is not enough: for smooth concave g the mixture
    // bound can exceed the general sharp value. Claim sharpness only when an
    // explicit family member attains it.
    r.sharp = fl.concave && fl.increasing && g.at_one() == 1.0 && mode == AtomMode::IncludeAtoms &&
              meas.atoms.empty() && std::isfinite(r.upper) &&
              r.upper - r.lower <= 1e-9 * std::max(1.0, std::abs(r.upper));
    return r;
}

BoundResult bound_symmetric(const Distortion& g, const MomentInfo& m) {
    check_moments(m);
    if (m.sigma == 0.0) return degenerate(ShapeClass::Symmetric, g, m, AtomMode::IncludeAtoms);
    const PiecewiseFn dk = symmetric_hat_envelope(g).derivative();
    const double n2 = sq_norm(dk);
    const double k_hat = 0.5 * std::sqrt(n2);
    const double k_bar = symmetric_constant_bar(g);
    if (std::abs(k_hat - k_bar) > 1e-9 * std::max(1.0, k_hat))
        throw NumericError("symmetric bound: the two envelope forms disagree", k_hat, std::abs(k_hat - k_bar));
    BoundResult r;
    r.shape = ShapeClass::Symmetric;
    r.lower = r.upper = r.family_value = m.mu * g.at_one() + m.sigma * k_hat;
    r.sharp = true;
    if (usc_regularize(g).unchanged) {
        if (n2 > 0.0) {
            r.worst_qf = QuantileFn(dk.scaled(m.sigma / std::sqrt(n2)).plus_constant(m.mu));
        } else {
            // Degenerate envelope: any symmetric feasible quantile attains mu g(1).
            r.worst_qf = QuantileFn(PiecewiseFn::from_terms(
                {Term{1.0, m.mu - m.sigma * kSqrt3, 2.0 * kSqrt3 * m.sigma, 1.0, 0.0}}));
        }
    }
    return r;
}

BoundResult bound_symmetric_unimodal(const Distortion& g, const MomentInfo& m, AtomMode mode) {
    check_moments(m);
    if (m.sigma == 0.0) return degenerate(ShapeClass::SymmetricUnimodal, g, m, mode);
    const FamilyKernel fk(hat(g));
    numerics::SupOptions opt;
    opt.open_hi = true;
    const auto s = numerics::sup_scan([&](double b) { return fk.ups(b); }, 0.5, 1.0, opt);
    BoundResult r;
    r.shape = ShapeClass::SymmetricUnimodal;
    r.mode = mode;
    r.family = Family::S;
    r.b_star = s.argmax;
    r.family_value = r.lower = m.mu * g.at_one() + m.sigma * s.value;
    r.upper = m.mu * g.at_one() + m.sigma * delta(g, mode);
    r.sharp = false;
    return r;
}

BoundResult compute_bound(ShapeClass shape, const Distortion& g, const MomentInfo& m, AtomMode mode) {
    switch (shape) {
    case ShapeClass::General: return bound_general(g, m);
    case ShapeClass::Unimodal: return bound_unimodal(g, m, mode);
    case ShapeClass::Symmetric: return bound_symmetric(g, m);
    case ShapeClass::SymmetricUnimodal: return bound_symmetric_unimodal(g, m, mode);
    }
    throw ContractError("unknown shape");
}

double tvar_sup(ShapeClass shape, double a, const MomentInfo& m) {
    check_moments(m);
    if (!(a >= 0.0 && a < 1.0)) throw DomainError("tvar_sup needs alpha in [0, 1)");
    const double mu = m.mu, s = m.sigma;
    switch (shape) {
    case ShapeClass::General: return mu + s * std::sqrt(a / (1 - a));
    case ShapeClass::Unimodal:
        if (a < 0.5) return mu + s * std::sqrt(a * (8 - 9 * a)) / (3 * (1 - a));
        return mu + s * std::sqrt(8 / (9 * (1 - a)) - 1);
    case ShapeClass::Symmetric:
        if (a < 0.5) return mu + s * std::sqrt(a / 2) / (1 - a);
        return mu + s * std::sqrt(1 / (2 * (1 - a)));
    case ShapeClass::SymmetricUnimodal:
        if (a < 1.0 / 3.0) return mu + s * 2 * std::sqrt(a) / (3 * (1 - a));
        if (a < 2.0 / 3.0) return mu + s * kSqrt3 * a;
        return mu + s * 2 / (3 * std::sqrt(1 - a));
    }
    throw ContractError("unknown shape");
}

WeightedBound bound_weighted(const Distortion& g, const WeightSpec& w, const MomentInfo& psi_moments,
                             ShapeClass shape, AtomMode mode) {
    // identity Psi is the plain riskmetric, which is fine for any g(1)
    if (!w.is_identity() && std::abs(g.at_one()) > 1e-12) throw ContractError("weighted bounds need g(1) = 0");
    WeightedBound out{compute_bound(shape, g, psi_moments, mode), {}};
    if (out.psi_space.worst_qf) {
        const QuantileFn q = *out.psi_space.worst_qf;
        out.x_quantile = [q, w](double u) { return w.inverse(q(u)); };
    }
    return out;
}

}  // namespace riskbound
