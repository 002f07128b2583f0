#include "riskbound/distortion.hpp"

#include "riskbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace riskbound {

Distortion::Distortion(PiecewiseFn fn, DistortionFlags flags)
    : fn_(std::move(fn)), flags_(flags) {
    const double g0 = fn_.point_values().front();
    if (std::abs(g0) > 1e-14) throw DomainError("distortion needs g(0) = 0, got " + std::to_string(g0));
#ifndef NDEBUG
    if (!verify_flags(*this)) throw ContractError("asserted distortion flags fail the grid check");
#endif
}

std::vector<Jump> Distortion::jumps(double tol) const {
    std::vector<Jump> out;
    const auto& br = fn_.breaks();
    for (double x : br) {
        const double lo = x > 0.0 ? fn_.left_limit(x) : fn_(0.0);
        const double hi = x < 1.0 ? fn_.right_limit(x) : fn_(1.0);
        if (std::abs(hi - lo) > tol) out.push_back({x, hi - lo});
    }
    return out;
}

Distortion Distortion::with_envelope(PiecewiseFn env) const {
    Distortion d = *this;
    d.envelope_ = std::make_shared<const PiecewiseFn>(std::move(env));
    return d;
}

Distortion Distortion::with_hat_envelope(PiecewiseFn env) const {
    Distortion d = *this;
    d.hat_envelope_ = std::make_shared<const PiecewiseFn>(std::move(env));
    return d;
}

Distortion hat(const Distortion& g) {
    const double g1 = g.at_one();
    PiecewiseFn f = g.fn().reflect().scaled(-1.0).plus_constant(g1);
    DistortionFlags fl;
    fl.continuous = g.flags().continuous;
    fl.increasing = g.flags().increasing;
    fl.concave = g.flags().convex;
    fl.convex = g.flags().concave;
    Distortion out(std::move(f), fl);
    out.envelope_ = g.hat_envelope_;
    out.hat_envelope_ = g.envelope_;
    return out;
}

Distortion symmetrize(const Distortion& g) {
    const double g1 = g.at_one();
    PiecewiseFn f = (g.fn() + g.fn().reflect()).plus_constant(-g1).scaled(0.5);
    DistortionFlags fl;
    fl.continuous = g.flags().continuous;
    fl.concave = g.flags().concave;
    fl.convex = g.flags().convex;
    return Distortion(std::move(f), fl);
}

Regularized usc_regularize(const Distortion& g) {
    const PiecewiseFn& f = g.fn();
    std::vector<double> vals = f.point_values();
    bool unchanged = true;
    const auto& br = f.breaks();
    for (std::size_t i = 1; i + 1 < br.size(); ++i) {
        const double m = std::max({vals[i], f.left_limit(br[i]), f.right_limit(br[i])});
        // rounding noise of a formula evaluated at its own kink is not a jump
        if (m - vals[i] > 1e-13 * std::max(1.0, std::abs(vals[i]))) {
            vals[i] = m;
            unchanged = false;
        }
    }
    if (unchanged) return {g, true};
    std::vector<std::vector<Term>> pieces;
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        auto t = f.piece_terms(i);
        pieces.emplace_back(t.begin(), t.end());
    }
    DistortionFlags fl = g.flags();
    return {Distortion(PiecewiseFn(br, std::move(pieces), std::move(vals)), fl), false};
}

namespace {

void require_entropy(const Distortion& g, const char* who) {
    if (std::abs(g.at_one()) > 1e-12)
        throw ContractError(std::string(who) + " needs g(1) = 0");
}

}  // namespace

Distortion residual_transform(const Distortion& g, double q) {
    require_entropy(g, "residual_transform");
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("residual_transform needs q in [0, 1)");
    DistortionFlags fl;
    fl.continuous = g.flags().continuous;
    return Distortion(g.fn().compose_affine(q, 1.0, 1.0, 0.0).scaled(-1.0), fl);
}

Distortion past_transform(const Distortion& g, double q) {
    require_entropy(g, "past_transform");
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("past_transform needs q in (0, 1]");
    DistortionFlags fl;
    fl.continuous = g.flags().continuous;
    return Distortion(g.fn().compose_affine(0.0, q, 1.0, 0.0).scaled(-1.0), fl);
}

bool verify_flags(const Distortion& g, std::size_t n) {
    const DistortionFlags& fl = g.flags();
    if (!(fl.increasing || fl.concave || fl.convex || fl.continuous)) return true;
    std::vector<double> v(n);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = g(static_cast<double>(i) / static_cast<double>(n - 1));
        if (!std::isfinite(v[i])) return false;
        scale = std::max(scale, std::abs(v[i]));
    }
    const double tol = 1e-12 * scale;
    for (std::size_t i = 1; i < n; ++i) {
        if (fl.increasing && v[i] < v[i - 1] - tol) return false;
        if (i + 1 < n) {
            const double mid = 0.5 * (v[i - 1] + v[i + 1]);
            if (fl.concave && v[i] < mid - tol) return false;
            if (fl.convex && v[i] > mid + tol) return false;
        }
    }
    if (fl.continuous && !g.fn().is_continuous(1e-12 * scale)) return false;
    return true;
}

}  // namespace riskbound
