#include "riskbound/evaluate.hpp"

#include "riskbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskbound {

WeightSpec::WeightSpec(std::string name, std::function<double(double)> Psi,
                       std::function<double(double)> psi, double domain_lo, double domain_hi,
                       bool identity)
    : name_(std::move(name)), Psi_(std::move(Psi)), psi_(std::move(psi)), lo_(domain_lo),
      hi_(domain_hi), identity_(identity) {}

WeightSpec WeightSpec::identity() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return WeightSpec("identity", [](double x) { return x; }, [](double) { return 1.0; }, -inf, inf, true);
}

WeightSpec WeightSpec::half_square() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return WeightSpec("half_square", [](double x) { return 0.5 * x * x; }, [](double x) { return x; }, 0.0, inf);
}

WeightSpec WeightSpec::exponential() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return WeightSpec("exp", [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }, -inf, inf);
}

WeightSpec WeightSpec::by_name(const std::string& name) {
    if (name == "identity" || name == "id") return identity();
    if (name == "half_square") return half_square();
    if (name == "exp") return exponential();
    throw DomainError("unknown weight function: " + name);
}

double WeightSpec::inverse(double y) const {
    if (identity_) return y;
    // Expand a bracket inside the domain, then Brent.
    double a = std::isfinite(lo_) ? lo_ : -1.0;
    double b = std::isfinite(hi_) ? hi_ : 1.0;
    if (std::isfinite(lo_) && Psi_(a) > y) throw DomainError("weight inverse: value below the range of Psi");
    for (int i = 0; i < 200 && Psi_(a) > y; ++i) a = a * 2 - 1;
    for (int i = 0; i < 200 && Psi_(b) < y; ++i) b = b * 2 + 1;
    auto r = numerics::brent_root([&](double x) { return Psi_(x) - y; }, a, b, 1e-15);
    if (!r) throw NumericError("weight inverse: no bracket found");
    return *r;
}

namespace {

// Stieltjes atoms of hat g: (location, mass approached from the left, from the right).
struct SplitAtom {
    double x, left, right;
};

std::vector<SplitAtom> split_atoms(const PiecewiseFn& hg) {
    std::vector<SplitAtom> out;
    for (double x : hg.breaks()) {
        const double v = hg(x);
        const double l = x > 0.0 ? v - hg.left_limit(x) : 0.0;
        const double r = x < 1.0 ? hg.right_limit(x) - v : 0.0;
        if (l != 0.0 || r != 0.0) out.push_back({x, l, r});
    }
    return out;
}

}  // namespace

double riskmetric(const QuantileFn& q, const Distortion& g) {
    const Distortion hg = hat(g);
    const PiecewiseFn dens = hg.fn().derivative();
    double total = integrate_product(q.fn(), dens, 0.0, 1.0);
    for (const SplitAtom& a : split_atoms(hg.fn())) {
        if (a.left != 0.0) total += a.left * q.left(a.x);
        if (a.right != 0.0) total += a.right * q.right(a.x);
    }
    return total;
}

double weighted_entropy(const QuantileFn& q, const Distortion& g, const WeightSpec& w) {
    if (std::abs(g.at_one()) > 1e-12) throw ContractError("weighted entropy needs g(1) = 0");
    if (w.is_identity()) return riskmetric(q, g);
    const Distortion hg = hat(g);
    const PiecewiseFn dens = hg.fn().derivative();
    const PiecewiseFn& qf = q.fn();
    std::vector<double> br;
    std::merge(qf.breaks().begin(), qf.breaks().end(), dens.breaks().begin(), dens.breaks().end(),
               std::back_inserter(br));
    br.erase(std::unique(br.begin(), br.end()), br.end());
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
        const double a = br[j], b = br[j + 1];
        const double m = 0.5 * (a + b);
        const std::size_t iq = qf.piece_index(m), id = dens.piece_index(m);
        if (dens.piece_terms(id).empty()) continue;
        numerics::SingularityHints h;
        if (a == dens.piece_lo(id)) h.lower = dens.piece_exponent(id, true);
        if (b == dens.piece_hi(id)) h.upper = dens.piece_exponent(id, false);
        total += numerics::integrate(
            [&](double u) { return w(qf.eval_piece(iq, u)) * dens.eval_piece(id, u); }, a, b,
            numerics::kDefaultQuadTol, h);
    }
    for (const SplitAtom& a : split_atoms(hg.fn())) {
        if (a.left != 0.0) total += a.left * w(q.left(a.x));
        if (a.right != 0.0) total += a.right * w(q.right(a.x));
    }
    return total;
}

Moments moments(const QuantileFn& q) {
    const double mean = q.fn().integral(0.0, 1.0);
    const PiecewiseFn c = q.fn().plus_constant(-mean);
    return {mean, integrate_product(c, c, 0.0, 1.0)};
}

Moments moments(const QuantileFn& q, const WeightSpec& w) {
    if (w.is_identity()) return moments(q);
    const PiecewiseFn& f = q.fn();
    auto pass = [&](const std::function<double(double)>& tr) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.piece_count(); ++i) {
            const double a = f.piece_lo(i), b = f.piece_hi(i);
            s += numerics::integrate([&](double u) { return tr(f.eval_piece(i, u)); }, a, b,
                                     numerics::kDefaultQuadTol, piece_hints(f, i, a, b));
        }
        return s;
    };
    const double mean = pass([&](double x) { return w(x); });
    const double var = pass([&](double x) {
        const double d = w(x) - mean;
        return d * d;
    });
    return {mean, var};
}

bool check_symmetric(const QuantileFn& q, double mu, double tol) {
    constexpr int kN = 2000;
    const auto& br = q.fn().breaks();
    auto is_break = [&](double u) { return std::binary_search(br.begin(), br.end(), u); };
    for (int i = 0; i < kN; ++i) {
        const double u = (i + 0.5) / kN;
        if (is_break(u) || is_break(1.0 - u)) continue;
        const double a = q.left(u), b = q.left(1.0 - u);
        if (std::abs(a + b - 2 * mu) > tol * std::max({1.0, std::abs(a), std::abs(b)})) return false;
    }
    return true;
}

}  // namespace riskbound
