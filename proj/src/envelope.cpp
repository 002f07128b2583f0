#include "riskbound/envelope.hpp"

#include "riskbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace riskbound {

double PiecewiseLinearFn::operator()(double x) const {
    if (u.empty()) throw ContractError("empty piecewise linear function");
    if (x <= u.front()) return value.front();
    if (x >= u.back()) return value.back();
    auto it = std::upper_bound(u.begin(), u.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - u.begin());
    const double w = (x - u[j - 1]) / (u[j] - u[j - 1]);
    return value[j - 1] + w * (value[j] - value[j - 1]);
}

PiecewiseFn PiecewiseLinearFn::to_piecewise() const { return PiecewiseFn::linear_interpolant(u, value); }

namespace {

struct Samples {
    std::vector<double> x, y;
    std::vector<char> is_break;
};

Samples sample_for_hull(const PiecewiseFn& f, std::size_t n) {
    Samples s;
    const auto& br = f.breaks();
    std::size_t bi = 0;
    auto push = [&](double x, bool brk) {
        double y = f(x);
        if (brk) {
            if (x > 0.0) y = std::min(y, f.left_limit(x));
            if (x < 1.0) y = std::min(y, f.right_limit(x));
        }
        s.x.push_back(x);
        s.y.push_back(y);
        s.is_break.push_back(brk ? 1 : 0);
    };
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        while (bi < br.size() && br[bi] < x) {
            if (s.x.empty() || br[bi] > s.x.back()) push(br[bi], true);
            ++bi;
        }
        bool brk = false;
        if (bi < br.size() && br[bi] == x) {
            brk = true;
            ++bi;
        }
        if (s.x.empty() || x > s.x.back()) push(x, brk);
    }
    return s;
}

std::vector<std::size_t> lower_hull_indices(const Samples& s) {
    std::vector<std::size_t> h;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        while (h.size() >= 2) {
            const std::size_t a = h[h.size() - 2], b = h.back();
            const double cross = (s.x[b] - s.x[a]) * (s.y[i] - s.y[a]) -
                                 (s.y[b] - s.y[a]) * (s.x[i] - s.x[a]);
            if (cross <= 0.0) h.pop_back();
            else break;
        }
        h.push_back(i);
    }
    return h;
}

}  // namespace

PiecewiseLinearFn lower_convex_hull(const PiecewiseFn& f, std::size_t n_grid) {
    if (n_grid < 2) throw DomainError("hull grid needs at least two cells");
    Samples s = sample_for_hull(f, n_grid);
    PiecewiseLinearFn out;
    for (std::size_t i : lower_hull_indices(s)) {
        out.u.push_back(s.x[i]);
        out.value.push_back(s.y[i]);
    }
    return out;
}

PiecewiseFn convex_envelope(const PiecewiseFn& f, std::size_t n_grid) {
    if (n_grid < 2) throw DomainError("hull grid needs at least two cells");
    Samples s = sample_for_hull(f, n_grid);
    std::vector<std::size_t> h = lower_hull_indices(s);
    double scale = 1.0;
    for (double y : s.y) scale = std::max(scale, std::abs(y));
    const double tol = 1e-12 * scale;

    // Classify hull edges: contact if it joins adjacent samples and f is convex on it.
    const std::size_t ne = h.size() - 1;
    std::vector<char> contact(ne, 0);
    for (std::size_t k = 0; k < ne; ++k) {
        const std::size_t i = h[k], j = h[k + 1];
        if (j != i + 1) continue;
        const double xa = s.x[i], xb = s.x[j];
        const double xm = 0.5 * (xa + xb);
        const std::size_t p = f.piece_index(xm);
        const double fa = f.eval_piece(p, xa), fb = f.eval_piece(p, xb), fm = f.eval_piece(p, xm);
        if (std::abs(fa - s.y[i]) > tol || std::abs(fb - s.y[j]) > tol) continue;
        if (fm > 0.5 * (fa + fb) + tol) continue;
        contact[k] = 1;
    }

    // Vertex positions (refined below for tangent points).
    std::vector<double> vx(h.size()), vy(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        vx[k] = s.x[h[k]];
        vy[k] = s.y[h[k]];
    }
    const PiecewiseFn df = f.derivative();
    auto fv = [&](double x) { return f.eval_piece(f.piece_index(x), x); };
    auto dv = [&](double x) { return df.eval_piece(df.piece_index(x), x); };

    for (std::size_t k = 0; k < ne; ++k) {
        if (contact[k]) continue;
        const bool left_tangent = k > 0 && contact[k - 1] && !s.is_break[h[k]];
        const bool right_tangent = k + 1 < ne && contact[k + 1] && !s.is_break[h[k + 1]];
        if (!left_tangent && !right_tangent) continue;
        double sx = vx[k], tx = vx[k + 1];
        // Brackets stay within one grid cell of the sampled vertex and inside the runs.
        const std::size_t i = h[k], j = h[k + 1];
        const double s_lo = s.x[i > 0 ? i - 1 : i];
        const double s_hi = s.x[std::min(i + 1, j - 1)];
        const double t_lo = s.x[std::max(j - 1, i + 1)];
        const double t_hi = s.x[j + 1 < s.x.size() ? j + 1 : j];
        for (int it = 0; it < 12; ++it) {
            const double s_old = sx, t_old = tx;
            if (right_tangent) {
                const double fs = left_tangent ? fv(sx) : vy[k];
                auto phi = [&](double t) { return fv(t) - fs - dv(t) * (t - sx); };
                if (auto r = numerics::brent_root(phi, std::max(t_lo, sx + 1e-15), t_hi, 1e-15)) tx = *r;
            }
            if (left_tangent) {
                const double ft = right_tangent ? fv(tx) : vy[k + 1];
                auto psi = [&](double x) { return ft - fv(x) - dv(x) * (tx - x); };
                if (auto r = numerics::brent_root(psi, s_lo, std::min(s_hi, tx - 1e-15), 1e-15)) sx = *r;
            }
            if (std::abs(sx - s_old) < 1e-16 && std::abs(tx - t_old) < 1e-16) break;
        }
        if (left_tangent) {
            vx[k] = sx;
            vy[k] = fv(sx);
        }
        if (right_tangent) {
            vx[k + 1] = tx;
            vy[k + 1] = fv(tx);
        }
    }

    // Assemble: contact edges copy f's pieces, bridges are straight lines.
    std::vector<double> br{0.0};
    std::vector<std::vector<Term>> pieces;
    std::vector<double> vals{vy[0]};
    auto push_piece = [&](double hi, std::vector<Term> terms, double v_hi) {
        if (!(hi > br.back())) return;
        br.push_back(hi);
        pieces.push_back(std::move(terms));
        vals.push_back(v_hi);
    };
    for (std::size_t k = 0; k < ne; ++k) {
        const double a = vx[k], b = vx[k + 1];
        if (!(b > a)) continue;
        if (contact[k]) {
            std::size_t p = f.piece_index(0.5 * (a + b));
            // A contact edge never straddles a breakpoint of f (breakpoints are samples).
            auto t = f.piece_terms(p);
            push_piece(b, std::vector<Term>(t.begin(), t.end()), vy[k + 1]);
        } else {
            const double slope = (vy[k + 1] - vy[k]) / (b - a);
            push_piece(b, {Term{1.0, vy[k] - slope * a, slope, 1.0, 0.0}}, vy[k + 1]);
        }
    }
    br.back() = 1.0;
    return PiecewiseFn(std::move(br), std::move(pieces), std::move(vals));
}

PiecewiseFn convex_envelope(const Distortion& d, std::size_t n_grid) {
    if (d.envelope_hint()) return *d.envelope_hint();
    if (d.flags().convex) return d.fn();
    return convex_envelope(d.fn(), n_grid);
}

PiecewiseFn concave_envelope(const PiecewiseFn& f, std::size_t n_grid) {
    return convex_envelope(f.scaled(-1.0), n_grid).scaled(-1.0);
}

PiecewiseFn concave_envelope(const Distortion& d, std::size_t n_grid) {
    if (d.flags().concave) return d.fn();
    return concave_envelope(d.fn(), n_grid);
}

DerivativeMeasure derivative_measure(const PiecewiseFn& f) {
    DerivativeMeasure m;
    const PiecewiseFn df = f.derivative();
    const auto& br = df.breaks();
    for (std::size_t i = 1; i + 1 < br.size(); ++i) {
        const double lo = df.eval_piece(i - 1, br[i]);
        const double hi = df.eval_piece(i, br[i]);
        const double mass = hi - lo;
        const double tol = 1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
        if (mass < -tol)
            throw ContractError("derivative measure: function is not convex near u = " + std::to_string(br[i]));
        if (mass > tol) m.atoms.push_back({br[i], mass});
    }
    m.density = df.derivative();
    m.total = df.left_limit(1.0) - df.right_limit(0.0);
    return m;
}

double integrate_measure(const Weight& h, const DerivativeMeasure& m, AtomMode mode) {
    double total = integrate_weighted(m.density, h, 0.0, 1.0);
    if (mode == AtomMode::IncludeAtoms)
        for (const Atom& a : m.atoms) total += a.mass * h.h(a.location, 1.0 - a.location);
    return total;
}

double stieltjes_sum(const std::vector<double>& h, const std::vector<double>& g) {
    if (h.size() + 1 != g.size()) throw ContractError("stieltjes_sum needs |g| = |h| + 1");
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * (g[i + 1] - g[i]);
    return s;
}

}  // namespace riskbound
