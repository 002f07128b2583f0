#include "riskbound/oracle.hpp"

#include "riskbound/errors.hpp"
#include "riskbound/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace riskbound {

namespace {

struct BRange {
    double lo, hi;
    bool open_lo, open_hi;
};

BRange family_range(Family fam) {
    switch (fam) {
    case Family::UR: return {0.0, 1.0, false, true};
    case Family::UL: return {0.0, 1.0, true, false};
    case Family::S: return {0.5, 1.0, false, true};
    }
    throw ContractError("unknown family");
}

double moment_gap(const QuantileFn& q, const MomentInfo& m) {
    const Moments mo = moments(q);
    return std::max(std::abs(mo.mean - m.mu), std::abs(mo.variance - m.sigma * m.sigma));
}

}  // namespace

FamilySup family_sup(Family fam, const Distortion& g, const MomentInfo& m, int b_grid) {
    if (b_grid < 2) throw DomainError("family_sup needs b_grid >= 2");
    const BRange r = family_range(fam);
    const double h = (r.hi - r.lo) / (b_grid - 1);
    // open ends are approached, not touched
    const double lo = r.open_lo ? r.lo + 1e-7 * h : r.lo;
    const double hi = r.open_hi ? r.hi - 1e-7 * h : r.hi;
    auto value = [&](double b) { return riskmetric(family_quantile(fam, b, m), g); };

    FamilySup out;
    int best = -1;
    for (int i = 0; i < b_grid; ++i) {
        const double b = std::clamp(r.lo + h * i, lo, hi);
        const double v = value(b);
        if (best < 0 || v > out.value) {
            best = i;
            out.value = v;
            out.b_best = b;
        }
    }
    if (m.sigma > 0.0) {
        const double a = std::max(lo, out.b_best - h), c = std::min(hi, out.b_best + h);
        const double bs = numerics::golden_max(value, a, c, 1e-12);
        const double v = value(bs);
        if (v > out.value) {
            out.value = v;
            out.b_best = bs;
        }
    }
    out.moment_error = std::max({moment_gap(family_quantile(fam, lo, m), m),
                                 moment_gap(family_quantile(fam, hi, m), m),
                                 moment_gap(family_quantile(fam, out.b_best, m), m)});
    return out;
}

Moments knot_moments(const Knots& k) {
    double s1 = 0.0;
    for (std::size_t i = 0; i + 1 < k.u.size(); ++i)
        s1 += (k.u[i + 1] - k.u[i]) * (k.v[i] + k.v[i + 1]) / 2.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i + 1 < k.u.size(); ++i) {
        const double a = k.v[i] - s1, b = k.v[i + 1] - s1;
        s2 += (k.u[i + 1] - k.u[i]) * (a * a + a * b + b * b) / 3.0;
    }
    return {s1, s2};
}

namespace {

using Rng = std::mt19937_64;

double unif(Rng& rng, double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(rng); }
int pick(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
// heavy tailed positive slopes so near-extremal shapes turn up
double slope(Rng& rng) { return std::exp(std::normal_distribution<double>(0.0, 1.5)(rng)); }
bool coin(Rng& rng, double p) { return unif(rng) < p; }

std::vector<double> sorted_cuts(Rng& rng, int n, double a, double b) {
    std::vector<double> c(static_cast<std::size_t>(n));
    for (double& x : c) x = unif(rng, a, b);
    std::sort(c.begin(), c.end());
    return c;
}

// Increasing knots on [a, b], with jumps if allowed. Slopes are either free or
// sorted (ascending -> convex, descending -> concave).
void append_segments(Knots& k, Rng& rng, double a, double b, int order, bool jumps) {
    const int n = pick(rng, 1, 5);
    std::vector<double> cuts = sorted_cuts(rng, n - 1, a, b);
    cuts.insert(cuts.begin(), a);
    cuts.push_back(b);
    std::vector<double> s(static_cast<std::size_t>(n));
    for (double& x : s) x = coin(rng, 0.1) ? 0.0 : slope(rng);
    if (order > 0) std::sort(s.begin(), s.end());
    if (order < 0) std::sort(s.rbegin(), s.rend());
    for (int i = 0; i < n; ++i) {
        const double u0 = cuts[static_cast<std::size_t>(i)], u1 = cuts[static_cast<std::size_t>(i) + 1];
        if (jumps && i > 0 && coin(rng, 0.3)) {
            k.u.push_back(u0);
            k.v.push_back(k.v.back() + slope(rng));
        }
        k.u.push_back(u1);
        k.v.push_back(k.v.back() + s[static_cast<std::size_t>(i)] * (u1 - u0));
    }
}

// Reflect knots given on [1/2, 1] into a full quantile symmetric about 0.
Knots reflect_upper(const Knots& up) {
    Knots k;
    for (std::size_t i = up.u.size(); i-- > 0;) {
        k.u.push_back(1.0 - up.u[i]);
        k.v.push_back(-up.v[i]);
    }
    for (std::size_t i = 0; i < up.u.size(); ++i) {
        if (i == 0 && up.v[0] == 0.0) continue;  // no jump at 1/2
        k.u.push_back(up.u[i]);
        k.v.push_back(up.v[i]);
    }
    return k;
}

Knots raw_knots(ShapeClass shape, Rng& rng) {
    Knots k;
    switch (shape) {
    case ShapeClass::General:
        k.u = {0.0};
        k.v = {0.0};
        append_segments(k, rng, 0.0, 1.0, 0, true);
        return k;
    case ShapeClass::Symmetric: {
        Knots up{{0.5}, {coin(rng, 0.5) ? 0.0 : slope(rng)}};
        append_segments(up, rng, 0.5, 1.0, 0, true);
        return reflect_upper(up);
    }
    case ShapeClass::SymmetricUnimodal: {
        Knots up{{0.5}, {0.0}};
        append_segments(up, rng, 0.5, 1.0, +1, false);
        return reflect_upper(up);
    }
    case ShapeClass::Unimodal: {
        // mode at u_m, sometimes at an end; concave before it, convex after
        const double r = unif(rng);
        const double um = r < 0.15 ? 0.0 : r < 0.3 ? 1.0 : unif(rng);
        k.u = {0.0};
        k.v = {0.0};
        if (um > 0.0) append_segments(k, rng, 0.0, um, -1, false);
        if (um < 1.0) {
            Knots tail{{um}, {k.v.back()}};
            append_segments(tail, rng, um, 1.0, +1, false);
            // a flat stretch at the mode is allowed on both sides of it
            k.u.insert(k.u.end(), tail.u.begin() + 1, tail.u.end());
            k.v.insert(k.v.end(), tail.v.begin() + 1, tail.v.end());
        }
        return k;
    }
    }
    throw ContractError("unknown shape");
}

}  // namespace

Knots random_feasible_knots(ShapeClass shape, const MomentInfo& m, Rng& rng) {
    for (;;) {
        Knots k = raw_knots(shape, rng);
        const Moments mo = knot_moments(k);
        if (!(mo.variance > 1e-12)) continue;
        const double sd = std::sqrt(mo.variance);
        const double c = shape == ShapeClass::Symmetric || shape == ShapeClass::SymmetricUnimodal ? 0.0 : mo.mean;
        for (double& v : k.v) v = m.mu + m.sigma * (v - c) / sd;
        return k;
    }
}

bool knots_in_shape(const Knots& k, ShapeClass shape, double mu, double tol) {
    const std::size_t n = k.u.size();
    if (n < 2 || k.u.front() != 0.0 || k.u.back() != 1.0) return false;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (k.u[i + 1] < k.u[i] || k.v[i + 1] < k.v[i] - tol) return false;
    const bool sym = shape == ShapeClass::Symmetric || shape == ShapeClass::SymmetricUnimodal;
    if (sym) {
        // q(u) + q(1-u) is piecewise linear with kinks at the knots and their
        // mirrors, so checking the knots and the two ends is exact
        if (std::abs(k.v.front() + k.v.back() - 2.0 * mu) > tol) return false;
        const QuantileFn q = QuantileFn::from_knots(k.u, k.v);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = k.u[i];
            if (u == 0.0 || u == 1.0) continue;
            if (std::abs(q.left(u) + q.right(1.0 - u) - 2.0 * mu) > tol) return false;
        }
    }
    const bool uni = shape == ShapeClass::Unimodal || shape == ShapeClass::SymmetricUnimodal;
    if (uni) {
        std::vector<double> s;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (k.u[i + 1] == k.u[i]) {
                if (k.v[i + 1] - k.v[i] > tol) return false;  // a gap in the support
                continue;
            }
            s.push_back((k.v[i + 1] - k.v[i]) / (k.u[i + 1] - k.u[i]));
        }
        std::size_t j = 0;
        while (j + 1 < s.size() && s[j + 1] <= s[j] * (1 + 1e-9) + tol) ++j;
        while (j + 1 < s.size() && s[j + 1] >= s[j] * (1 - 1e-9) - tol) ++j;
        if (j + 1 != s.size() && !s.empty()) return false;
    }
    return true;
}

OracleMax random_feasible_max(ShapeClass shape, const Distortion& g, const MomentInfo& m, int trials,
                              std::uint64_t seed) {
    if (trials < 1) throw DomainError("random_feasible_max needs trials >= 1");
    Rng rng(seed);
    OracleMax out;
    for (int t = 0; t < trials; ++t) {
        const Knots k = random_feasible_knots(shape, m, rng);
        const double v = riskmetric(QuantileFn::from_knots(k.u, k.v), g);
        if (out.best_trial < 0 || v > out.value) {
            out.value = v;
            out.best_trial = t;
        }
    }
    return out;
}

}  // namespace riskbound
