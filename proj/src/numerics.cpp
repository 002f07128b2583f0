#include "riskbound/numerics.hpp"

#include "riskbound/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace riskbound::numerics {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One Gauss-Kronrod 15 panel with the QUADPACK error heuristic.
Segment gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        f1[j] = f(c - dx);
        f2[j] = f(c + dx);
        resk += kWgk[j] * (f1[j] + f2[j]);
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    resk *= h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs((resk - resg * h));
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (!std::isfinite(resk))
        throw NumericError("integrand not finite on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    return {a, b, resk, err};
}

QuadResult gk_adaptive(const RealFn& f, double a, double b, double tol,
                       std::size_t max_evals) {
    QuadResult out;
    if (a == b) return out;
    std::priority_queue<Segment> work;
    Segment first = gk15(f, a, b);
    out.evaluations = 15;
    double total = first.value;
    double err = first.error;
    work.push(first);
    double settled_value = 0.0, settled_err = 0.0;
    while (!work.empty()) {
        if (err <= tol || err <= 1e-14 * std::abs(total)) break;
        if (out.evaluations + 30 > max_evals) {
            out.value = total;
            out.error = err;
            if (err > 1e3 * tol)
                throw NumericError("quadrature budget exhausted", total, err);
            return out;
        }
        Segment s = work.top();
        work.pop();
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b) ||
            std::abs(s.b - s.a) < 1e-15 * std::max(1.0, std::abs(mid))) {
            // Cannot split further; keep the panel as is.
            settled_value += s.value;
            settled_err += s.error;
            continue;
        }
        Segment l = gk15(f, s.a, mid);
        Segment r = gk15(f, mid, s.b);
        out.evaluations += 30;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        work.push(l);
        work.push(r);
    }
    // Re-sum to limit drift from the running updates.
    double sum = settled_value, esum = settled_err;
    while (!work.empty()) {
        sum += work.top().value;
        esum += work.top().error;
        work.pop();
    }
    out.value = sum;
    out.error = esum;
    return out;
}

double substitution_power(double p) {
    if (p >= 1.0) return 1.0;
    if (p <= -1.0) return 40.0;
    return std::clamp(2.0 / (p + 1.0), 1.0, 40.0);
}

// u = a + w t^m  (from_lower) or u = b - w t^m, t in [0, 1]. [a, b] sits inside
// the caller's [A, B] and shares the substituted end with it; the distance to
// that end is handed over exactly instead of being recovered from u.
QuadResult integrate_one_sided(const AnchoredFn& f, double a, double b, double A, double B, double p,
                               bool from_lower, double tol, std::size_t max_evals) {
    const double m = substitution_power(p);
    const double w = b - a;
    RealFn g = [&](double t) {
        const double tm1 = std::pow(t, m - 1.0);
        const double d = w * tm1 * t;
        if (!(d > 0.0 && d < w)) return 0.0;
        const double jac = w * m * tm1;
        if (jac == 0.0) return 0.0;
        const double u = from_lower ? a + d : b - d;
        return from_lower ? f(u, d, B - u) * jac : f(u, u - A, d) * jac;
    };
    return gk_adaptive(g, 0.0, 1.0, tol, max_evals);
}

}  // namespace

QuadResult integrate_anchored(const AnchoredFn& f, double a, double b, double tol,
                              SingularityHints hints, std::size_t max_evals) {
    if (!(std::isfinite(a) && std::isfinite(b)))
        throw DomainError("integration limits must be finite");
    if (a == b) return {};
    if (a > b) {
        AnchoredFn flipped = [&](double u, double dl, double dh) { return f(u, dh, dl); };
        QuadResult r = integrate_anchored(flipped, b, a, tol, {hints.upper, hints.lower}, max_evals);
        r.value = -r.value;
        return r;
    }
    const bool lo = hints.lower.has_value() && *hints.lower < 1.0;
    const bool hi = hints.upper.has_value() && *hints.upper < 1.0;
    if (lo && hi) {
        const double c = 0.5 * (a + b);
        QuadResult l = integrate_one_sided(f, a, c, a, b, *hints.lower, true, 0.5 * tol, max_evals / 2);
        QuadResult r = integrate_one_sided(f, c, b, a, b, *hints.upper, false, 0.5 * tol, max_evals / 2);
        return {l.value + r.value, l.error + r.error, l.evaluations + r.evaluations};
    }
    if (lo && substitution_power(*hints.lower) > 1.0)
        return integrate_one_sided(f, a, b, a, b, *hints.lower, true, tol, max_evals);
    if (hi && substitution_power(*hints.upper) > 1.0)
        return integrate_one_sided(f, a, b, a, b, *hints.upper, false, tol, max_evals);
    RealFn plain = [&](double u) {
        if (!(u > a && u < b)) return 0.0;
        return f(u, u - a, b - u);
    };
    return gk_adaptive(plain, a, b, tol, max_evals);
}

QuadResult integrate_adaptive(const RealFn& f, double a, double b, double tol,
                              SingularityHints hints, std::size_t max_evals) {
    // u itself may round onto an end here; the integrand only sees u, so skip those
    AnchoredFn g = [&](double u, double, double) {
        if (!(u > std::min(a, b) && u < std::max(a, b))) return 0.0;
        return f(u);
    };
    return integrate_anchored(g, a, b, tol, hints, max_evals);
}

double integrate(const RealFn& f, double a, double b, double tol, SingularityHints hints) {
    return integrate_adaptive(f, a, b, tol, hints).value;
}

std::optional<double> brent_root(const RealFn& f, double lo, double hi, double xtol,
                                 int max_iter) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) return std::nullopt;
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2 * kEps * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2 * xm * s;
                q = 1 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2 * xm * qq * (qq - r) - (b - a) * (r - 1));
                q = (qq - 1) * (r - 1) * (s - 1);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

std::vector<double> all_roots(const RealFn& f, double lo, double hi, std::size_t n_scan,
                              double xtol) {
    std::vector<double> roots;
    double x0 = lo, f0 = f(lo);
    for (std::size_t i = 1; i <= n_scan; ++i) {
        const double x1 = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_scan);
        const double f1 = f(x1);
        if (f0 == 0.0) {
            if (roots.empty() || roots.back() != x0) roots.push_back(x0);
        } else if (std::isfinite(f0) && std::isfinite(f1) && f1 != 0.0 && (f0 > 0) != (f1 > 0)) {
            if (auto r = brent_root(f, x0, x1, xtol)) roots.push_back(*r);
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0 && (roots.empty() || roots.back() != x0)) roots.push_back(x0);
    return roots;
}

double golden_max(const RealFn& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {  // ties lean left
            b = d; d = c; fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

SupResult sup_scan(const RealFn& f, double lo, double hi, const SupOptions& opt) {
    if (!(hi > lo)) throw DomainError("sup_scan needs lo < hi");
    const std::size_t n = std::max<std::size_t>(opt.n_grid, 3);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    SupResult best{lo, -std::numeric_limits<double>::infinity(), false};
    std::size_t best_i = 0;

    auto consider = [&](double x, double v, std::size_t i) {
        if (std::isnan(v)) return;
        if (v > best.value) {
            best.value = v;
            best.argmax = x;
            best_i = i;
        }
    };
    // Approach an open endpoint geometrically and watch for growth that does not settle.
    auto approach = [&](bool at_lo) {
        std::array<double, 6> vals{};
        for (int j = 0; j < 6; ++j) {
            const double d = step * std::pow(10.0, -(j + 1));
            const double x = at_lo ? lo + d : hi - d;
            vals[j] = f(x);
            if (std::isinf(vals[j]) && vals[j] > 0) best.unbounded = true;
            consider(x, vals[j], at_lo ? 0 : n - 1);
        }
        const double d1 = vals[4] - vals[3], d2 = vals[5] - vals[4];
        if (d1 > 0 && d2 > 0 && d2 >= 0.9 * d1 &&
            vals[5] - vals[3] > 1e-6 * (1.0 + std::abs(vals[5])))
            best.unbounded = true;
    };

    if (opt.open_lo) approach(true);
    for (std::size_t i = 0; i < n; ++i) {
        if ((i == 0 && opt.open_lo) || (i == n - 1 && opt.open_hi)) continue;
        const double x = (i == n - 1) ? hi : lo + step * static_cast<double>(i);
        const double v = f(x);
        if (std::isinf(v) && v > 0) best.unbounded = true;
        consider(x, v, i);
    }
    if (opt.open_hi) approach(false);
    if (best.unbounded) {
        best.value = std::numeric_limits<double>::infinity();
        return best;
    }
    if (!std::isfinite(best.value))
        throw NumericError("sup_scan found no finite value");

    // Refine inside the neighbouring cells of the best node.
    double a = best_i == 0 ? lo : lo + step * static_cast<double>(best_i - 1);
    double b = best_i + 1 >= n ? hi : lo + step * static_cast<double>(best_i + 1);
    if (opt.open_lo && a <= lo) a = lo + step * 1e-6;
    if (opt.open_hi && b >= hi) b = hi - step * 1e-6;
    if (b > a) {
        const double x = golden_max(f, a, b, opt.refine_tol);
        const double v = f(x);
        if (v > best.value && !(std::abs(v - best.value) <= 1e-15 * std::abs(v) && x > best.argmax)) {
            best.value = v;
            best.argmax = x;
        }
    }
    return best;
}

// ---- special functions ----

double log_gamma(double x) { return std::lgamma(x); }

double gamma_fn(double x) { return std::tgamma(x); }

double beta_fn(double a, double b) {
    if (!(a > 0 && b > 0)) throw DomainError("beta needs positive arguments");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1, qam = a - 1;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge", h, 0.0);
}

}  // namespace

double beta_inc_reg(double x, double a, double b) {
    if (!(a > 0 && b > 0)) throw DomainError("incomplete beta needs positive a, b");
    if (x < 0 || x > 1) throw DomainError("incomplete beta needs x in [0, 1]");
    if (x == 0) return 0.0;
    if (x == 1) return 1.0;
    const double lbt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                       b * std::log1p(-x);
    const double bt = std::exp(lbt);
    if (x < (a + 1) / (a + b + 2)) return bt * beta_cf(x, a, b) / a;
    return 1.0 - bt * beta_cf(1 - x, b, a) / b;
}

double beta_inc(double x, double a, double b) {
    if (!(a > 0 && b > 0)) throw DomainError("incomplete beta needs positive a, b");
    if (x < 0 || x > 1) throw DomainError("incomplete beta needs x in [0, 1]");
    if (x == 0) return 0.0;
    // Direct form avoids the 1 - (...) cancellation when the result is small.
    const double lx = a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1) / (a + b + 2)) return std::exp(lx) * beta_cf(x, a, b) / a;
    return beta_fn(a, b) * beta_inc_reg(x, a, b);
}

namespace {

double gamma_series(double s, double x) {
    double ap = s, sum = 1.0 / s, del = sum;
    for (int n = 0; n < 100000; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double gamma_cf(double s, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / kTiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double gamma_p(double s, double x) {
    if (!(s > 0)) throw DomainError("incomplete gamma needs s > 0");
    if (x < 0) throw DomainError("incomplete gamma needs x >= 0");
    if (x == 0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < s + 1 ? gamma_series(s, x) : 1.0 - gamma_cf(s, x);
}

double gamma_q(double s, double x) {
    if (!(s > 0)) throw DomainError("incomplete gamma needs s > 0");
    if (x < 0) throw DomainError("incomplete gamma needs x >= 0");
    if (x == 0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return x < s + 1 ? 1.0 - gamma_series(s, x) : gamma_cf(s, x);
}

double gamma_lower(double s, double x) { return gamma_p(s, x) * std::tgamma(s); }

double gamma_upper(double s, double x) { return gamma_q(s, x) * std::tgamma(s); }

}  // namespace riskbound::numerics
