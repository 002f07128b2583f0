#include "riskbound/catalog.hpp"

#include "riskbound/errors.hpp"
#include "riskbound/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace riskbound {

namespace {

using numerics::beta_fn;
using numerics::beta_inc;
using numerics::gamma_fn;
using numerics::gamma_lower;
using numerics::gamma_upper;

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-11;

double quad(const numerics::RealFn& f, double a, double b, std::optional<double> ea = {},
            std::optional<double> eb = {}) {
    if (!(b > a)) return 0.0;
    return numerics::integrate(f, a, b, kQuadTol, {ea, eb});
}

bool is_int(double x) { return x == std::floor(x); }

// Convex envelope of the FGRE hat for alpha > 1: a chord from the origin,
// tangent at u0, then the function itself.
struct FgreKink {
    double u0;
    double b;
};

double fgre_hat(double a, double u) {
    if (u >= 1.0) return 0.0;
    const double L = -std::log1p(-u);
    return -(1.0 - u) * std::pow(L, a) / gamma_fn(a + 1.0);
}

std::optional<double> fgre_u0(double a) {
    if (!(a > 1.0)) return std::nullopt;
    auto f = [a](double u) { return a * u + std::log1p(-u); };
    // f(1 - e^{1-a}) >= 0 and f -> -inf at 1.
    return numerics::brent_root(f, 1.0 - std::exp(1.0 - a), std::nextafter(1.0, 0.0), 1e-15);
}

FgreKink fgre_kink(double a) {
    const auto u0 = fgre_u0(a);
    if (!u0) throw NumericError("FGRE: tangent point equation has no root");
    return {*u0, fgre_hat(a, *u0) / *u0};
}

Term fgre_term(double a) { return Term{-1.0 / gamma_fn(a + 1.0), 1.0, -1.0, 1.0, a}; }

// ---- reference family values -------------------------------------------------

double ct_lambda_R(double a, double b) {
    return (b * b + 1.0 - 2.0 * (std::pow(b, a + 1.0) + a) / (a + 1.0)) /
           ((1.0 - a) * std::sqrt(std::pow(1.0 - b, 3) * (1.0 / 3.0 + b)));
}
double ct_lambda_L(double a, double b) {
    return kSqrt3 * (-b + 2.0 * std::pow(b, a) / (a + 1.0)) / ((1.0 - a) * std::sqrt(b * (4.0 - 3.0 * b)));
}
double ct_upsilon(double a, double b) {
    return (std::pow(b, a + 1.0) - std::pow(1.0 - b, a + 1.0) - (a + 1.0) * b + a) /
           ((a * a - 1.0) * std::sqrt(2.0 / 3.0 * std::pow(1.0 - b, 3)));
}

double fg_lambda_R(double a, double b) {
    const double L = -std::log1p(-b);
    return (std::pow(L, a) * (1 - b) * (1 - b) + a / std::pow(2.0, a) * gamma_upper(a, 2 * L)) /
           (gamma_fn(a + 1) * std::sqrt(std::pow(1 - b, 3) * (1.0 / 3.0 + b)));
}
double fg_lambda_L(double a, double b) {
    const double L = -std::log1p(-b);
    return kSqrt3 * (-std::pow(L, a) * (1 - b) * (1 - b) + a / std::pow(2.0, a) * gamma_lower(a, 2 * L)) /
           (gamma_fn(a + 1) * std::sqrt(b * b * b * (4 - 3 * b)));
}
double fg_upsilon(double a, double b) {
    const double L = -std::log1p(-b);
    return (gamma_upper(a + 1, 2 * L) + gamma_lower(a + 1, -2 * std::log(b))) /
           (std::pow(2.0, a + 1) * gamma_fn(a + 1) * std::sqrt(2.0 / 3.0 * std::pow(1 - b, 3)));
}

// ---- root equations ----------------------------------------------------------

struct RootEq {
    numerics::RealFn f;
    double lo, hi;
};

std::optional<RootEq> root_equation(const MeasureId& id, RootKind which) {
    switch (id.kind) {
    case MeasureKind::CT:
    case MeasureKind::Gini: {
        const double a = id.kind == MeasureKind::Gini ? 2.0 : id.alpha;
        switch (which) {
        case RootKind::b0:
            return RootEq{[a](double b) {
                              return 3 * (a - 1) * std::pow(b, a + 1) - 2 * (a + 1) * std::pow(b, a) -
                                     (a + 1) * std::pow(b, a - 1) + 2 * (a + 1) * b + 4 - 2 * a;
                          },
                          0.0, 1.0};
        case RootKind::b1:
            return RootEq{[a](double b) {
                              // stationarity of lambda_L; the b^a coefficient is 3(1-a)
                              return 3 * (1 - a) * std::pow(b, a) + (4 * a - 2) * std::pow(b, a - 1) - (a + 1);
                          },
                          0.0, 1.0};
        case RootKind::b2:
            return RootEq{[a](double b) {
                              return (1 - 2 * a) * std::pow(b, a + 1) + (2 * a - 1) * std::pow(1 - b, a + 1) +
                                     2 * (a + 1) * std::pow(b, a) - (a + 1) * b + a - 2;
                          },
                          0.5, 1.0};
        case RootKind::u0: return std::nullopt;
        }
        break;
    }
    case MeasureKind::CRE:
        if (which == RootKind::b0)
            return RootEq{[](double b) { return 2.0 / 3.0 * std::log1p(-b) + b; }, 0.0, 1.0};
        if (which == RootKind::b2)
            return RootEq{[](double b) {
                              const double L = -std::log1p(-b);
                              return 8 * L * (1 - b) * (1 - b) + 8 * (-std::log(b)) * (1 - b) * b -
                                     3 * (gamma_upper(2, 2 * L) + gamma_lower(2, -2 * std::log(b)));
                          },
                          0.5, 1.0};
        [[fallthrough]];
    case MeasureKind::FGRE: {
        const double a = id.kind == MeasureKind::CRE ? 1.0 : id.alpha;
        const double s = a / std::pow(2.0, a);
        switch (which) {
        case RootKind::b0:
            return RootEq{[a, s](double b) {
                              const double L = -std::log1p(-b);
                              return s * b * gamma_upper(a, 2 * L) - std::pow(L, a) * (1 - b) * (1 - b) / 3.0;
                          },
                          0.0, 1.0};
        case RootKind::b1:
            return RootEq{[a, s](double b) {
                              const double L = -std::log1p(-b);
                              return (3 - 2 * b) * std::pow(L, a) - 3 * s * gamma_lower(a, 2 * L);
                          },
                          0.0, 1.0};
        case RootKind::b2:
            return RootEq{[a](double b) {
                              const double L = -std::log1p(-b);
                              const double c = std::pow(2.0, a + 2);
                              return c * std::pow(L, a) * (1 - b) * (1 - b) +
                                     c * std::pow(-std::log(b), a) * (1 - b) * b -
                                     3 * (gamma_upper(a + 1, 2 * L) + gamma_lower(a + 1, -2 * std::log(b)));
                          },
                          0.5, 1.0};
        case RootKind::u0:
            if (!(a > 1.0)) return std::nullopt;
            return RootEq{[a](double u) { return a * u + std::log1p(-u); }, 1.0 - std::exp(1.0 - a), 1.0};
        }
        break;
    }
    default: break;
    }
    throw ContractError(std::string("no reference root equation for ") + measure_kind_name(id.kind));
}

double max_at_roots(const std::vector<double>& roots, const numerics::RealFn& f, double init) {
    double best = init;
    for (double r : roots) {
        const double v = f(r);
        if (std::isfinite(v)) best = std::max(best, v);
    }
    return best;
}

// ---- weights of the reference Theta / Delta integrals ---------------------------

double theta_w(double u) {
    return u <= 0.5 ? std::sqrt(std::max(0.0, u * (8 - 9 * u))) : std::sqrt(std::max(0.0, (9 * u - 1) * (1 - u)));
}

// int over [lo, 1] of theta(u) * dens(u), split at 1/2.
double theta_integral(const numerics::RealFn& dens, double lo, std::optional<double> e_lo,
                      std::optional<double> e_hi) {
    auto f = [&](double u) { return theta_w(u) * dens(u); };
    double s = 0.0;
    if (lo < 0.5) s += quad(f, lo, 0.5, e_lo, {});
    s += quad(f, std::max(lo, 0.5), 1.0, lo > 0.5 ? e_lo : std::optional<double>{}, e_hi);
    return s;
}

double delta_w(double u) {
    if (u <= 1.0 / 3.0) return 2.0 / 3.0 * std::sqrt(std::max(0.0, u));
    if (u <= 2.0 / 3.0) return kSqrt3 * (1 - u) * u;
    return 2.0 / 3.0 * std::sqrt(std::max(0.0, 1 - u));
}

double delta_integral(const numerics::RealFn& dens, double lo, std::optional<double> e_lo,
                      std::optional<double> e_hi) {
    auto f = [&](double u) { return delta_w(u) * dens(u); };
    const double c1 = 1.0 / 3.0, c2 = 2.0 / 3.0;
    double s = 0.0;
    if (lo < c1) s += quad(f, lo, c1, e_lo, {});
    if (lo < c2) s += quad(f, std::max(lo, c1), c2, lo > c1 ? e_lo : std::optional<double>{}, {});
    s += quad(f, std::max(lo, c2), 1.0, lo > c2 ? e_lo : std::optional<double>{}, e_hi);
    return s;
}

ClosedForm sharp(double v) { return {v, v, true}; }
ClosedForm range(std::optional<double> lo, std::optional<double> hi) { return {lo, hi, false}; }

[[noreturn]] void unsupported(const MeasureId& id, ShapeClass s) {
    throw UnsupportedError("no reference closed form for " + id.label() + " / " + shape_name(s));
}

// ---- per-measure closed forms (mu = 0, sigma = 1, g(1) term added by caller) ---

ClosedForm ct_form(double a, ShapeClass shape, const MeasureId& id) {
    if (!(a > 0.5)) throw DomainError("CT closed forms need alpha > 1/2");
    switch (shape) {
    case ShapeClass::General: unsupported(id, shape);
    case ShapeClass::Unimodal: {
        const double base = kSqrt3 / (a + 1);
        double lo = max_at_roots(solve_example_roots(id, RootKind::b0), [a](double b) { return ct_lambda_R(a, b); },
                                 base);
        lo = max_at_roots(solve_example_roots(id, RootKind::b1), [a](double b) { return ct_lambda_L(a, b); }, lo);
        const double up =
            a / 3 *
            (quad([a](double u) { return std::sqrt(8 - 9 * u) * std::pow(u, a - 1.5); }, 0.0, 0.5, a - 1.5, {}) +
             quad([a](double u) { return std::sqrt((9 * u - 1) * (1 - u)) * std::pow(u, a - 2); }, 0.5, 1.0, {},
                  0.5));
        return range(lo, up);
    }
    case ShapeClass::Symmetric:
        return sharp(a / (std::sqrt(2.0) * std::abs(1 - a)) * std::sqrt(1 / (2 * a - 1) - beta_fn(a, a)));
    case ShapeClass::SymmetricUnimodal: {
        const double lo = max_at_roots(solve_example_roots(id, RootKind::b2),
                                       [a](double b) { return ct_upsilon(a, b); }, kSqrt3 / (a + 1));
        std::optional<double> up;
        if (a > 1.0) {
            // The middle Beta term is B(a, 2): the density a u^(a-2) against
            // sqrt3 (1-u) u integrates to a sqrt3 [B_{2/3}(a,2) - B_{1/3}(a,2)].
            up = a * (4 / (std::pow(3.0, a + 0.5) * (2 * a - 1)) +
                      kSqrt3 * (beta_inc(2.0 / 3.0, a, 2) - beta_inc(1.0 / 3.0, a, 2)) +
                      2.0 / 3.0 * (beta_fn(a - 1, 1.5) - beta_inc(2.0 / 3.0, a - 1, 1.5)));
        }
        return range(lo, up);
    }
    }
    unsupported(id, shape);
}

// Gamma(alpha+1)^2 hat g'(u) hat g'(1-u) with A = -log u, B = -log(1-u).
double fg_cross(double a, double u) {
    const double A = -std::log(u), B = -std::log1p(-u);
    return (std::pow(A, a) - a * std::pow(A, a - 1)) * (std::pow(B, a) - a * std::pow(B, a - 1));
}

double fg_w3(double a, double u) {
    const double B = -std::log1p(-u);
    return std::pow(B, a - 1) - (a - 1) * std::pow(B, a - 2);
}

// fg_w3 in terms of s = 1 - u, for tails near u = 1
double fg_w3s(double a, double s) {
    const double B = -std::log(s);
    return std::pow(B, a - 1) - (a - 1) * std::pow(B, a - 2);
}

ClosedForm fgre_form(double a, ShapeClass shape, const MeasureId& id) {
    const double G = gamma_fn(a + 1);
    // w1 = w3 / (1-u); small-u exponent of w1 is a-2. Tails near 1 run in s = 1-u.
    auto w1 = [a](double u) { return fg_w3(a, u) / (1 - u); };
    const double e0 = a - 2;
    switch (shape) {
    case ShapeClass::General: unsupported(id, shape);
    case ShapeClass::Unimodal: {
        double lo = max_at_roots(solve_example_roots(id, RootKind::b0), [a](double b) { return fg_lambda_R(a, b); },
                                 kSqrt3 / std::pow(2.0, a));
        lo = max_at_roots(solve_example_roots(id, RootKind::b1), [a](double b) { return fg_lambda_L(a, b); }, lo);
        double up;
        auto tail = [&](double from) {
            return quad([a](double t) { return std::sqrt(8 - 9 * t) * fg_w3s(a, t) / std::sqrt(t); }, 0.0,
                        1.0 - from, -0.5, {});
        };
        if (a <= 1.0) {
            if (!(a > 0.5)) {
                up = kInf;
            } else {
                up = a / (3 * G) *
                     (quad([&](double u) { return std::sqrt(u * (8 - 9 * u)) * w1(u); }, 0.0, 0.5, e0 + 0.5, {}) +
                      tail(0.5));
            }
        } else {
            const double u0 = fgre_kink(a).u0;
            if (u0 < 0.5)
                up = a / (3 * G) *
                     (quad([&](double u) { return std::sqrt(u * (8 - 9 * u)) * w1(u); }, u0, 0.5) + tail(0.5));
            else
                up = a / (3 * G) * tail(u0);
        }
        return range(lo, up);
    }
    case ShapeClass::Symmetric: {
        if (a <= 1.0) {
            if (!(a > 0.5)) throw DomainError("FGRE symmetric closed form needs alpha > 1/2");
            const double ea = std::min(0.0, a - 1);
            const double eta = quad([a](double u) { return fg_cross(a, u); }, 0.0, 0.5, ea, {}) +
                               quad([a](double u) { return fg_cross(a, u); }, 0.5, 1.0, {}, ea);
            return sharp(std::sqrt(a * a * gamma_fn(2 * a - 1) - eta) / (std::sqrt(2.0) * G));
        }
        const FgreKink k = fgre_kink(a);
        const double u0 = k.u0, b = k.b;
        const double L0 = -std::log1p(-u0);
        const double head = (std::pow(L0, 2 * a) * (1 - u0) + a * a * gamma_upper(2 * a - 1, L0)) / (2 * G * G);
        if (u0 >= 0.5) {
            return sharp(std::sqrt(b * b * (1 - u0) / 2 + head - b * std::pow(L0, a) * (1 - u0) / G));
        }
        const double delta = quad([a](double u) { return fg_cross(a, u); }, u0, 1 - u0);
        return sharp(std::sqrt(b * b * u0 / 2 - b * std::pow(-std::log(u0), a) * u0 / G + head -
                               delta / (2 * G * G)));
    }
    case ShapeClass::SymmetricUnimodal: {
        const double lo = max_at_roots(solve_example_roots(id, RootKind::b2),
                                       [a](double b) { return fg_upsilon(a, b); }, kSqrt3 / std::pow(2.0, a));
        auto p1 = [&](double from) {
            return 2.0 / 3.0 * quad([&](double u) { return std::sqrt(u) * w1(u); }, from, 1.0 / 3.0,
                                    from == 0.0 ? std::optional<double>(e0 + 0.5) : std::nullopt, {});
        };
        auto p2 = [&](double from) {
            return kSqrt3 * quad([a](double u) { return u * fg_w3(a, u); }, from, 2.0 / 3.0);
        };
        auto p3 = [&](double from) {
            return 2.0 / 3.0 * quad([a](double t) { return fg_w3s(a, t) / std::sqrt(t); }, 0.0, 1.0 - from, -0.5, {});
        };
        double up;
        if (a <= 1.0) {
            up = a > 0.5 ? a / G * (p1(0.0) + p2(1.0 / 3.0) + p3(2.0 / 3.0)) : kInf;
        } else {
            const double u0 = fgre_kink(a).u0;
            if (u0 < 1.0 / 3.0) up = a / G * (p1(u0) + p2(1.0 / 3.0) + p3(2.0 / 3.0));
            else if (u0 < 2.0 / 3.0) up = a / G * (p2(u0) + p3(2.0 / 3.0));
            else up = a / G * p3(u0);
        }
        return range(lo, up);
    }
    }
    unsupported(id, shape);
}

ClosedForm cre_form(ShapeClass shape, const MeasureId& id) {
    switch (shape) {
    case ShapeClass::General: unsupported(id, shape);
    case ShapeClass::Unimodal: {
        const auto b0 = solve_example_root(id, RootKind::b0);
        if (!b0) throw NumericError("CRE: b0 equation has no root");
        const double lo = (0.5 - std::log1p(-*b0)) * std::sqrt(1 - *b0) / std::sqrt(1.0 / 3.0 + *b0);
        const double up =
            (quad([](double u) { return std::sqrt(u * (8 - 9 * u)) / (1 - u); }, 0.0, 0.5, 0.5, {}) +
             quad([](double u) { return std::sqrt((9 * u - 1) / (1 - u)); }, 0.5, 1.0, {}, -0.5)) /
            3;
        return range(lo, up);
    }
    case ShapeClass::Symmetric: return sharp(std::numbers::pi / (2 * kSqrt3));
    case ShapeClass::SymmetricUnimodal: {
        const auto b2 = solve_example_root(id, RootKind::b2);
        if (!b2) throw NumericError("CRE: b2 equation has no root");
        const double b = *b2;
        const double lo = (gamma_upper(2, -2 * std::log1p(-b)) + gamma_lower(2, -2 * std::log(b))) /
                          (4 * std::sqrt(2.0 / 3.0 * std::pow(1 - b, 3)));
        const double up = 2.0 / 3.0 * std::log((kSqrt3 + 1) / (kSqrt3 - 1)) + 1 / (2 * kSqrt3);
        return range(lo, up);
    }
    }
    unsupported(id, shape);
}

ClosedForm es_form(double p, ShapeClass shape, const MeasureId& id) {
    switch (shape) {
    case ShapeClass::General: unsupported(id, shape);
    case ShapeClass::Unimodal:
        if (p <= 0.5) return sharp(std::sqrt(p * (8 - 9 * p)) / (3 * (1 - p)));
        return sharp(std::sqrt((9 * p - 1) / (1 - p)) / 3);
    case ShapeClass::Symmetric:
        if (p >= 0.5) return sharp(std::sqrt(1 / (2 * (1 - p))));
        return sharp(std::sqrt(p / (2 * (1 - p) * (1 - p))));
    case ShapeClass::SymmetricUnimodal:
        if (p < 1.0 / 3.0) return sharp(2 * std::sqrt(p) / (3 * (1 - p)));
        if (p < 2.0 / 3.0) return sharp(kSqrt3 * p);
        return sharp(2 / (3 * std::sqrt(1 - p)));
    }
    unsupported(id, shape);
}

// EGS and GS. The unimodal and symmetric-unimodal displays carry only the
// absolutely continuous part of d(hat g_*)'.
ClosedForm egs_form(const MeasureId& id, ShapeClass shape, bool gs_display) {
    const double p = id.p, t = id.tau, r = gs_display ? 2.0 : id.r, c = 1 - p;
    if (t == 0.0) return es_form(p, shape, id);
    auto dens = [r](double u) { return std::pow(1 - u, r - 2); };
    // theta and delta weights add sqrt(1-u) at the top end
    const std::optional<double> e_hi = r - 1.5 < 1 ? std::optional<double>(r - 1.5) : std::nullopt;
    switch (shape) {
    case ShapeClass::General: unsupported(id, shape);
    case ShapeClass::Unimodal:
        return sharp(2 * r * (r - 1) * t / (3 * c * c) * theta_integral(dens, p, {}, e_hi));
    case ShapeClass::SymmetricUnimodal:
        return sharp(2 * r * (r - 1) * t / (c * c) * delta_integral(dens, p, {}, e_hi));
    case ShapeClass::Symmetric:
        if (p >= 0.5) {
            return sharp(std::sqrt(0.5 * (1 / c + 4 * t * t * (r - 1) * (r - 1) * std::pow(c, 2 * r - 5) / (2 * r - 1))));
        }
        if (gs_display) {
            const double v = p * (1 + 2 * t) * (1 + 2 * t) / (c * c) - 4 * t * p * p * (1 + 2 * t) / std::pow(c, 3) +
                             16 * t * t / (3 * c) -
                             16 * t * t * (beta_inc(c, 2, 2) - beta_inc(p, 2, 2)) / std::pow(c, 4);
            return sharp(std::sqrt(v) / std::sqrt(2.0));
        }
        {
            const double v = p / (c * c) + 4 * t * p * std::pow(c, r - 4) - 4 * t * std::pow(p, r) / std::pow(c, 3) +
                             4 * t * t * p * std::pow(c, 2 * r - 6) - 8 * t * t * std::pow(p, r) * std::pow(c, r - 5) +
                             4 * t * t * r * r * std::pow(c, 2 * r - 5) / (2 * r - 1) -
                             4 * t * t * r * r * (beta_inc(c, r, r) - beta_inc(p, r, r)) / std::pow(c, 4);
            return sharp(std::sqrt(v) / std::sqrt(2.0));
        }
    }
    unsupported(id, shape);
}

ClosedForm esn_form(const MeasureId& id, ShapeClass shape) {
    const double n = id.n, p = id.p, c = 1 - p;
    if (n == 1.0) return es_form(p, shape, id);
    auto dens = [n, p](double u) { return std::pow(u - p, n - 2); };
    const double k = n * (n - 1) / std::pow(c, n);
    switch (shape) {
    case ShapeClass::General: unsupported(id, shape);
    case ShapeClass::Unimodal: return sharp(k / 3 * theta_integral(dens, p, {}, 0.5));
    case ShapeClass::SymmetricUnimodal: return sharp(k * delta_integral(dens, p, {}, 0.5));
    case ShapeClass::Symmetric:
        if (p >= 0.5) return sharp(0.5 * std::sqrt(2 * n * n / ((2 * n - 1) * c)));
        {
            const double kappa =
                quad([n, p](double u) { return std::pow(u - p, n - 1) * std::pow(1 - u - p, n - 1); }, p, 1 - p);
            return sharp(0.5 * std::sqrt(2 * n * n / std::pow(c, 2 * n) * (std::pow(c, 2 * n - 1) / (2 * n - 1) - kappa)));
        }
    }
    unsupported(id, shape);
}

double g_at_one(const MeasureId& id) {
    switch (id.kind) {
    case MeasureKind::CT:
    case MeasureKind::Gini:
    case MeasureKind::FGRE:
    case MeasureKind::CRE: return 0.0;
    default: return 1.0;
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

// ---- MeasureId ------------------------------------------------------------------

MeasureId MeasureId::ct(double alpha) { MeasureId m; m.kind = MeasureKind::CT; m.alpha = alpha; return m; }
MeasureId MeasureId::gini() { MeasureId m; m.kind = MeasureKind::Gini; m.alpha = 2.0; return m; }
MeasureId MeasureId::fgre(double alpha) { MeasureId m; m.kind = MeasureKind::FGRE; m.alpha = alpha; return m; }
MeasureId MeasureId::cre() { MeasureId m; m.kind = MeasureKind::CRE; m.alpha = 1.0; return m; }
MeasureId MeasureId::egs(double p, double tau, double r) {
    MeasureId m; m.kind = MeasureKind::EGS; m.p = p; m.tau = tau; m.r = r; return m;
}
MeasureId MeasureId::gs(double p, double tau) { MeasureId m; m.kind = MeasureKind::GS; m.p = p; m.tau = tau; return m; }
MeasureId MeasureId::es(double p) { MeasureId m; m.kind = MeasureKind::ES; m.p = p; return m; }
MeasureId MeasureId::es_n(int n, double p) { MeasureId m; m.kind = MeasureKind::ESn; m.n = n; m.p = p; return m; }
MeasureId MeasureId::dual_power(double n) { MeasureId m; m.kind = MeasureKind::DualPower; m.n = n; return m; }
MeasureId MeasureId::prop_hazard(double gamma) {
    MeasureId m; m.kind = MeasureKind::PropHazard; m.gamma = gamma; return m;
}

std::string MeasureId::label() const {
    std::string s = measure_kind_name(kind);
    switch (kind) {
    case MeasureKind::CT:
    case MeasureKind::FGRE: return s + "(alpha=" + fmt(alpha) + ")";
    case MeasureKind::EGS: return s + "(p=" + fmt(p) + ",tau=" + fmt(tau) + ",r=" + fmt(r) + ")";
    case MeasureKind::GS: return s + "(p=" + fmt(p) + ",tau=" + fmt(tau) + ")";
    case MeasureKind::ES: return s + "(p=" + fmt(p) + ")";
    case MeasureKind::ESn: return s + "(n=" + fmt(n) + ",p=" + fmt(p) + ")";
    case MeasureKind::DualPower: return s + "(n=" + fmt(n) + ")";
    case MeasureKind::PropHazard: return s + "(gamma=" + fmt(gamma) + ")";
    default: return s;
    }
}

const char* measure_kind_name(MeasureKind k) {
    switch (k) {
    case MeasureKind::CT: return "CT";
    case MeasureKind::Gini: return "Gini";
    case MeasureKind::FGRE: return "FGRE";
    case MeasureKind::CRE: return "CRE";
    case MeasureKind::EGS: return "EGS";
    case MeasureKind::GS: return "GS";
    case MeasureKind::ES: return "ES";
    case MeasureKind::ESn: return "ES_n";
    case MeasureKind::DualPower: return "DualPower";
    case MeasureKind::PropHazard: return "PropHazard";
    }
    return "?";
}

MeasureKind measure_kind_from_name(const std::string& s) {
    for (MeasureKind k : {MeasureKind::CT, MeasureKind::Gini, MeasureKind::FGRE, MeasureKind::CRE, MeasureKind::EGS,
                          MeasureKind::GS, MeasureKind::ES, MeasureKind::ESn, MeasureKind::DualPower,
                          MeasureKind::PropHazard}) {
        if (s == measure_kind_name(k)) return k;
    }
    if (s == "ESn" || s == "ES_N") return MeasureKind::ESn;
    if (s == "CT_alpha") return MeasureKind::CT;
    if (s == "FGRE_alpha") return MeasureKind::FGRE;
    throw DomainError("unknown measure: " + s);
}

void validate(const MeasureId& id) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw DomainError(msg);
    };
    auto prob = [&](double p) { need(p > 0.0 && p < 1.0, "p must lie in (0, 1)"); };
    switch (id.kind) {
    case MeasureKind::CT: need(id.alpha > 0.0 && id.alpha != 1.0, "CT needs alpha > 0, alpha != 1"); break;
    case MeasureKind::Gini:
    case MeasureKind::CRE: break;
    case MeasureKind::FGRE: need(id.alpha > 0.0, "FGRE needs alpha > 0"); break;
    case MeasureKind::EGS: {
        prob(id.p);
        need(id.r > 1.0, "EGS needs r > 1");
        const double tmax = 1.0 / (2 * (id.r - 1) * std::pow(1 - id.p, id.r - 2));
        need(id.tau >= 0.0 && id.tau <= tmax * (1 + 1e-12), "EGS needs 0 <= tau <= 1/(2(r-1)(1-p)^(r-2))");
        break;
    }
    case MeasureKind::GS:
        prob(id.p);
        need(id.tau >= 0.0 && id.tau <= 0.5, "GS needs 0 <= tau <= 1/2");
        break;
    case MeasureKind::ES: prob(id.p); break;
    case MeasureKind::ESn:
        prob(id.p);
        need(id.n >= 1.0 && is_int(id.n), "ES_n needs a positive integer n");
        break;
    case MeasureKind::DualPower: need(id.n >= 1.0, "DualPower needs n >= 1"); break;
    case MeasureKind::PropHazard: need(id.gamma > 0.0 && id.gamma <= 1.0, "PropHazard needs gamma in (0, 1]"); break;
    }
}

AtomMode reference_mode(const MeasureId& id) {
    return (id.kind == MeasureKind::GS || id.kind == MeasureKind::EGS) && id.tau > 0.0 ? AtomMode::DensityOnly
                                                                                     : AtomMode::IncludeAtoms;
}

Distortion make_distortion(const MeasureId& id) {
    validate(id);
    DistortionFlags convex_inc{true, true, false, true};
    DistortionFlags convex_only{true, false, false, true};
    switch (id.kind) {
    case MeasureKind::CT:
    case MeasureKind::Gini: {
        const double a = id.kind == MeasureKind::Gini ? 2.0 : id.alpha;
        const double c = 1.0 / (1.0 - a);
        return Distortion(PiecewiseFn::from_terms({Term::monomial(c, 1.0), Term::monomial(-c, a)}), convex_only);
    }
    case MeasureKind::CRE:
    case MeasureKind::FGRE: {
        const double a = id.kind == MeasureKind::CRE ? 1.0 : id.alpha;
        PiecewiseFn f = PiecewiseFn::from_terms({fgre_term(a)});
        if (a <= 1.0) return Distortion(std::move(f), convex_only);
        const FgreKink k = fgre_kink(a);
        PiecewiseFn env({0.0, k.u0, 1.0}, {{Term::monomial(k.b, 1.0)}, {fgre_term(a)}});
        return Distortion(std::move(f), DistortionFlags{true, false, false, false}).with_envelope(std::move(env));
    }
    case MeasureKind::EGS:
    case MeasureKind::GS: {
        const double p = id.p, t = id.tau, r = id.kind == MeasureKind::GS ? 2.0 : id.r, c = 1 - p;
        // (u-p)/c + 2t/c^2 (1-u)^r - 2t c^(r-3) (1-u), zero at p
        std::vector<Term> tail{Term::power_of(1.0 / c, -p, 1.0, 1.0), Term::power_of(2 * t / (c * c), 1.0, -1.0, r),
                               Term::power_of(-2 * t * std::pow(c, r - 3), 1.0, -1.0, 1.0)};
        PiecewiseFn f({0.0, p, 1.0}, {{}, tail}, {0.0, 0.0, 1.0});
        return Distortion(std::move(f), convex_inc);
    }
    case MeasureKind::ES: {
        PiecewiseFn f({0.0, id.p, 1.0}, {{}, {Term::power_of(1.0 / (1 - id.p), -id.p, 1.0, 1.0)}}, {0.0, 0.0, 1.0});
        return Distortion(std::move(f), convex_inc);
    }
    case MeasureKind::ESn: {
        const double p = id.p;
        PiecewiseFn f({0.0, p, 1.0}, {{}, {Term{1.0, -p / (1 - p), 1.0 / (1 - p), id.n, 0.0}}}, {0.0, 0.0, 1.0});
        return Distortion(std::move(f), convex_inc);
    }
    case MeasureKind::DualPower:
        return Distortion(PiecewiseFn::from_terms({Term::monomial(1.0, id.n)}), convex_inc);
    case MeasureKind::PropHazard:
        return Distortion(
            PiecewiseFn::from_terms({Term::constant(1.0), Term::power_of(-1.0, 1.0, -1.0, id.gamma)}), convex_inc);
    }
    throw DomainError("unknown measure");
}

Distortion make_g(const MeasureId& id) { return hat(make_distortion(id)); }

bool has_closed_form(const MeasureId& id, ShapeClass shape) {
    switch (id.kind) {
    case MeasureKind::DualPower:
    case MeasureKind::PropHazard: return false;
    case MeasureKind::Gini: return true;
    default: return shape != ShapeClass::General;
    }
}

ClosedForm closed_form_bound(const MeasureId& id, ShapeClass shape, const MomentInfo& m) {
    validate(id);
    if (m.sigma < 0.0) throw DomainError("sigma must be non-negative");
    ClosedForm cf;
    switch (id.kind) {
    case MeasureKind::CT: cf = ct_form(id.alpha, shape, id); break;
    case MeasureKind::Gini:
        if (shape == ShapeClass::General) cf = sharp(1 / kSqrt3);
        else cf = ct_form(2.0, shape, id);
        break;
    case MeasureKind::FGRE:
        cf = id.alpha == 1.0 ? cre_form(shape, id) : fgre_form(id.alpha, shape, id);
        break;
    case MeasureKind::CRE: cf = cre_form(shape, id); break;
    case MeasureKind::EGS: cf = egs_form(id, shape, false); break;
    case MeasureKind::GS: cf = egs_form(id, shape, true); break;
    case MeasureKind::ES: cf = es_form(id.p, shape, id); break;
    case MeasureKind::ESn: cf = esn_form(id, shape); break;
    case MeasureKind::DualPower:
    case MeasureKind::PropHazard: unsupported(id, shape);
    }
    const double base = m.mu * g_at_one(id);
    if (cf.lower) cf.lower = base + m.sigma * *cf.lower;
    if (cf.upper) cf.upper = base + m.sigma * *cf.upper;
    return cf;
}

RootKind root_kind_from_name(const std::string& s) {
    if (s == "b0") return RootKind::b0;
    if (s == "b1") return RootKind::b1;
    if (s == "b2") return RootKind::b2;
    if (s == "u0") return RootKind::u0;
    throw DomainError("unknown root name: " + s);
}

std::vector<double> solve_example_roots(const MeasureId& id, RootKind which) {
    validate(id);
    const auto eq = root_equation(id, which);
    if (!eq) return {};
    if (which == RootKind::u0) {
        const auto u0 = fgre_u0(id.kind == MeasureKind::CRE ? 1.0 : id.alpha);
        return u0 ? std::vector<double>{*u0} : std::vector<double>{};
    }
    // Open bracket: the equations are singular or vanish identically at the ends.
    const double w = eq->hi - eq->lo;
    auto roots = numerics::all_roots(eq->f, eq->lo + 1e-7 * w, eq->hi - 1e-7 * w, 4096);
    return roots;
}

std::optional<double> solve_example_root(const MeasureId& id, RootKind which) {
    const auto r = solve_example_roots(id, which);
    if (r.empty()) return std::nullopt;
    return r.front();
}

std::vector<MeasureId> default_catalog() {
    return {MeasureId::ct(3.0),       MeasureId::ct(0.75),        MeasureId::gini(),
            MeasureId::fgre(0.75),    MeasureId::fgre(2.0),       MeasureId::cre(),
            MeasureId::egs(0.9, 0.5, 3.0), MeasureId::gs(0.95, 0.25), MeasureId::es(0.9),
            MeasureId::es_n(3, 0.8),  MeasureId::dual_power(3.0), MeasureId::prop_hazard(0.7)};
}

}  // namespace riskbound
