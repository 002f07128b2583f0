#include "riskbound/quantile.hpp"

#include "riskbound/errors.hpp"

#include <cmath>
#include <string>

namespace riskbound {

QuantileFn::QuantileFn(PiecewiseFn fn) : fn_(std::move(fn)) {
    // Monotonicity: jumps must go up and every piece must rise (sampled).
    const auto& br = fn_.breaks();
    double scale = 1.0;
    for (double v : fn_.point_values())
        if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
    const double tol = 1e-10 * scale;
    for (std::size_t i = 0; i < fn_.piece_count(); ++i) {
        const double a = br[i], b = br[i + 1];
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (int k = 1; k < 8; ++k) {
            const double v = fn_.eval_piece(i, a + (b - a) * k / 8.0);
            if (!std::isnan(prev) && v < prev - tol)
                throw DomainError("quantile function must be non-decreasing");
            prev = v;
        }
        if (i > 0) {
            const double jump = fn_.eval_piece(i, a) - fn_.eval_piece(i - 1, a);
            if (jump < -tol) throw DomainError("quantile function jumps downward at u = " + std::to_string(a));
        }
    }
}

QuantileFn QuantileFn::from_knots(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size() || u.size() < 2) throw DomainError("quantile knots: need matching u and value lists");
    if (u.front() != 0.0 || u.back() != 1.0) throw DomainError("quantile knots must span [0, 1]");
    std::vector<double> br{0.0};
    std::vector<std::vector<Term>> pieces;
    std::vector<double> vals{v[0]};
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        if (u[i + 1] < u[i]) throw DomainError("quantile knots must be sorted");
        if (v[i + 1] < v[i]) throw DomainError("quantile knots must be non-decreasing");
        if (u[i + 1] == u[i]) {
            // Jump: the breakpoint keeps the left value (F^{-1} convention).
            continue;
        }
        const double s = (v[i + 1] - v[i]) / (u[i + 1] - u[i]);
        br.push_back(u[i + 1]);
        pieces.push_back({Term{1.0, v[i] - s * u[i], s, 1.0, 0.0}});
        vals.push_back(v[i + 1]);
    }
    return QuantileFn(PiecewiseFn(std::move(br), std::move(pieces), std::move(vals)));
}

double QuantileFn::left(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level outside [0, 1]");
    if (u == 0.0) return fn_.right_limit(0.0);
    return fn_.left_limit(u);
}

double QuantileFn::right(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile level outside [0, 1]");
    if (u == 1.0) return fn_.left_limit(1.0);
    return fn_.right_limit(u);
}

QuantileFn QuantileFn::affine(double shift, double scale) const {
    if (scale < 0) throw DomainError("affine map of a quantile needs scale >= 0");
    return QuantileFn(fn_.scaled(scale).plus_constant(shift));
}

QuantileFn family_quantile(Family fam, double b, const MomentInfo& m) {
    const double mu = m.mu, s = m.sigma;
    switch (fam) {
    case Family::UR: {
        if (!(b >= 0.0 && b < 1.0)) throw DomainError("UR family needs b in [0, 1)");
        const double d = std::sqrt((1 - b) * (1 - b) * (1 - b) * (1.0 / 3.0 + b));
        // mu + s (2u - 1 - b^2)/d on [b, 1], written as low + (2s/d)(u - b) so the
        // join at b stays exact when d is tiny
        const double low = mu - s * std::sqrt((1 - b) / (1.0 / 3.0 + b));
        const std::vector<Term> right{Term::constant(low), Term::power_of(2 * s / d, -b, 1.0, 1.0)};
        if (b == 0.0) return QuantileFn(PiecewiseFn({0.0, 1.0}, {right}));
        return QuantileFn(PiecewiseFn({0.0, b, 1.0}, {{Term::constant(low)}, right}));
    }
    case Family::UL: {
        if (!(b > 0.0 && b <= 1.0)) throw DomainError("UL family needs b in (0, 1]");
        const double d = std::sqrt(b * b * b * (4 - 3 * b));
        // mu + s sqrt3 (2u - 2b + b^2)/d on [0, b), i.e. high + (2 sqrt3 s/d)(u - b)
        const double high = mu + s * std::sqrt(3 * b / (4 - 3 * b));
        const std::vector<Term> left{Term::constant(high), Term::power_of(2 * std::sqrt(3.0) * s / d, -b, 1.0, 1.0)};
        if (b == 1.0) return QuantileFn(PiecewiseFn({0.0, 1.0}, {left}));
        return QuantileFn(PiecewiseFn({0.0, b, 1.0}, {left, {Term::constant(high)}}));
    }
    case Family::S: {
        if (!(b >= 0.5 && b < 1.0)) throw DomainError("S family needs b in [1/2, 1)");
        const double d = std::sqrt(2.0 / 3.0 * (1 - b) * (1 - b) * (1 - b));
        // anchored at the flat part so mu is hit exactly there even when s / d is huge
        const Term c = Term::constant(mu);
        const Term lo = Term::power_of(s / d, -(1 - b), 1.0, 1.0);
        const Term hi = Term::power_of(s / d, -b, 1.0, 1.0);
        if (b == 0.5) return QuantileFn(PiecewiseFn({0.0, 0.5, 1.0}, {{c, lo}, {c, hi}}));
        return QuantileFn(PiecewiseFn({0.0, 1 - b, b, 1.0}, {{c, lo}, {c}, {c, hi}}));
    }
    }
    throw ContractError("unknown family");
}

const char* family_name(Family f) {
    switch (f) {
    case Family::UR: return "UR";
    case Family::UL: return "UL";
    case Family::S: return "S";
    }
    return "?";
}

}  // namespace riskbound
