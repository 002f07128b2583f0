#include "riskbound/piecewise.hpp"

#include "riskbound/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

namespace riskbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnap = 1e-14;

bool is_integer(double x) { return x == std::floor(x); }

// Merge duplicate shapes and drop zero coefficients.
std::vector<Term> normalize(std::vector<Term> terms) {
    std::map<std::tuple<double, double, double, double>, double> acc;
    double c = 0.0;
    for (Term t : terms) {
        if (t.coef == 0.0) continue;
        if (t.power == 0.0 && t.log_power == 0.0) {
            c += t.coef;
            continue;
        }
        if (t.slope == 0.0) {  // constant in u
            c += t(0.0);
            continue;
        }
        acc[{t.shift, t.slope, t.power, t.log_power}] += t.coef;
    }
    std::vector<Term> out;
    if (c != 0.0) out.push_back(Term::constant(c));
    for (const auto& [k, coef] : acc) {
        if (coef == 0.0) continue;
        out.push_back({coef, std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k)});
    }
    return out;
}

std::vector<double> merge_breaks(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> all;
    all.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));
    std::vector<double> out;
    out.reserve(all.size());
    for (double x : all) {
        if (out.empty() || x - out.back() > kSnap) out.push_back(x);
    }
    out.back() = 1.0;
    return out;
}

}  // namespace

double Term::operator()(double u) const {
    return at(shift + slope * u, (shift - 1.0) + slope * u);
}

double Term::eval_offset(double anchor, double off) const {
    return at((shift + slope * anchor) + slope * off, (shift - 1.0 + slope * anchor) + slope * off);
}

// vm1 = v - 1 computed by the caller without cancellation.
double Term::at(double v, double vm1) const {
    if (coef == 0.0) return 0.0;
    if (power == 0.0 && log_power == 0.0) return coef;
    const bool needs_nonneg = !is_integer(power) || log_power != 0.0;
    if (v < 0.0 && needs_nonneg) {
        if (v > -1e-12) v = 0.0;
        else return std::numeric_limits<double>::quiet_NaN();
    }
    if (v == 0.0) {
        if (power > 0.0) return 0.0;
        if (power == 0.0) {
            if (log_power > 0.0) return coef * kInf;
            return 0.0;
        }
        return coef * kInf;
    }
    double pv;
    if (power == 0.0) pv = 1.0;
    else if (power == 1.0) pv = v;
    else if (power == 2.0) pv = v * v;
    else pv = std::pow(v, power);
    if (log_power == 0.0) return coef * pv;
    // near 1 use log1p(v - 1); near 0 the shifted form would round to -1
    const double L = v > 0.5 ? -std::log1p(vm1) : -std::log(v);
    if (L == 0.0) return log_power > 0.0 ? 0.0 : coef * kInf;
    const double lv = log_power == 1.0 ? L : std::pow(L, log_power);
    return coef * pv * lv;
}

std::optional<double> Term::endpoint_exponent(double u0) const {
    if (coef == 0.0 || (power == 0.0 && log_power == 0.0) || slope == 0.0) return std::nullopt;
    const double v0 = shift + slope * u0;
    const double scale = std::max(std::abs(shift), std::abs(slope));
    if (std::abs(v0) <= 1e-13 * scale) {
        if (log_power == 0.0 && power >= 0.0 && is_integer(power)) return std::nullopt;
        return power;
    }
    if (log_power != 0.0 && std::abs(v0 - 1.0) <= 1e-13 * std::max(1.0, scale)) {
        if (log_power > 0.0 && is_integer(log_power)) return std::nullopt;
        return log_power;
    }
    return std::nullopt;
}

Term Term::derivative_main() const {
    return {coef * slope * power, shift, slope, power - 1.0, log_power};
}

Term Term::derivative_log() const {
    return {-coef * slope * log_power, shift, slope, power - 1.0, log_power - 1.0};
}

PiecewiseFn::PiecewiseFn(std::vector<double> breaks, std::vector<std::vector<Term>> pieces,
                         std::vector<double> point_values)
    : breaks_(std::move(breaks)), values_(std::move(point_values)) {
    if (breaks_.size() < 2 || pieces.size() + 1 != breaks_.size())
        throw ContractError("piecewise function: breaks/pieces size mismatch");
    offsets_.reserve(pieces.size() + 1);
    offsets_.push_back(0);
    for (auto& p : pieces) {
        auto n = normalize(std::move(p));
        terms_.insert(terms_.end(), n.begin(), n.end());
        offsets_.push_back(static_cast<std::uint32_t>(terms_.size()));
    }
    validate();
}

PiecewiseFn::PiecewiseFn(std::vector<double> breaks, std::vector<std::vector<Term>> pieces)
    : breaks_(std::move(breaks)) {
    if (breaks_.size() < 2 || pieces.size() + 1 != breaks_.size())
        throw ContractError("piecewise function: breaks/pieces size mismatch");
    offsets_.reserve(pieces.size() + 1);
    offsets_.push_back(0);
    for (auto& p : pieces) {
        auto n = normalize(std::move(p));
        terms_.insert(terms_.end(), n.begin(), n.end());
        offsets_.push_back(static_cast<std::uint32_t>(terms_.size()));
    }
    values_.resize(breaks_.size());
    values_[0] = eval_piece(0, breaks_[0]);
    for (std::size_t i = 1; i < breaks_.size(); ++i) values_[i] = eval_piece(i - 1, breaks_[i]);
    validate();
}

void PiecewiseFn::validate() const {
    if (values_.size() != breaks_.size())
        throw ContractError("piecewise function: one value per breakpoint required");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
        throw ContractError("piecewise function must live on [0, 1]");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1]))
            throw ContractError("piecewise function: breakpoints must increase strictly");
}

PiecewiseFn PiecewiseFn::constant(double c) {
    return PiecewiseFn({0.0, 1.0}, {{Term::constant(c)}});
}

PiecewiseFn PiecewiseFn::from_terms(std::vector<Term> terms) {
    return PiecewiseFn({0.0, 1.0}, {std::move(terms)});
}

PiecewiseFn PiecewiseFn::linear_interpolant(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw ContractError("linear interpolant needs matching knots (at least two)");
    if (xs.front() != 0.0 || xs.back() != 1.0)
        throw ContractError("linear interpolant knots must run from 0 to 1");
    PiecewiseFn f;
    f.breaks_.assign(xs.begin(), xs.end());
    f.values_.assign(ys.begin(), ys.end());
    f.terms_.reserve(xs.size() - 1);
    f.offsets_.reserve(xs.size());
    f.offsets_.push_back(0);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        // y_i + s (u - x_i) as a single linear term.
        f.terms_.push_back({1.0, ys[i] - s * xs[i], s, 1.0, 0.0});
        f.offsets_.push_back(static_cast<std::uint32_t>(f.terms_.size()));
    }
    f.validate();
    return f;
}

std::span<const Term> PiecewiseFn::piece_terms(std::size_t i) const {
    return {terms_.data() + offsets_[i], terms_.data() + offsets_[i + 1]};
}

double PiecewiseFn::eval_piece(std::size_t i, double u) const {
    double s = 0.0;
    for (std::uint32_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += terms_[k](u);
    return s;
}

double PiecewiseFn::eval_piece_near(std::size_t i, double from_lo, double lo, double from_hi,
                                    double hi) const {
    const bool use_lo = from_lo <= from_hi;
    const double anchor = use_lo ? lo : hi, off = use_lo ? from_lo : -from_hi;
    double s = 0.0;
    for (std::uint32_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += terms_[k].eval_offset(anchor, off);
    return s;
}

std::size_t PiecewiseFn::piece_index(double u) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(idx, piece_count() - 1);
}

double PiecewiseFn::operator()(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("argument outside [0, 1]: " + std::to_string(u));
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), u);
    if (it != breaks_.end() && *it == u) return values_[static_cast<std::size_t>(it - breaks_.begin())];
    return eval_piece(static_cast<std::size_t>(it - breaks_.begin()) - 1, u);
}

double PiecewiseFn::left_limit(double u) const {
    if (u <= 0.0) return right_limit(0.0);
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), u);
    return eval_piece(static_cast<std::size_t>(it - breaks_.begin()) - 1, u);
}

double PiecewiseFn::right_limit(double u) const {
    if (u >= 1.0) return left_limit(1.0);
    return eval_piece(piece_index(u), u);
}

std::optional<double> PiecewiseFn::piece_exponent(std::size_t i, bool at_lo) const {
    const double u0 = at_lo ? breaks_[i] : breaks_[i + 1];
    std::optional<double> out;
    for (const Term& t : piece_terms(i)) {
        auto e = t.endpoint_exponent(u0);
        if (e && (!out || *e < *out)) out = e;
    }
    return out;
}

PiecewiseFn PiecewiseFn::derivative() const {
    std::vector<std::vector<Term>> pieces(piece_count());
    for (std::size_t i = 0; i < piece_count(); ++i) {
        for (const Term& t : piece_terms(i)) {
            if (t.slope == 0.0 || (t.power == 0.0 && t.log_power == 0.0)) continue;
            if (t.power != 0.0) pieces[i].push_back(t.derivative_main());
            if (t.log_power != 0.0) pieces[i].push_back(t.derivative_log());
        }
    }
    PiecewiseFn d;
    d.breaks_ = breaks_;
    d.offsets_.push_back(0);
    for (auto& p : pieces) {
        auto n = normalize(std::move(p));
        d.terms_.insert(d.terms_.end(), n.begin(), n.end());
        d.offsets_.push_back(static_cast<std::uint32_t>(d.terms_.size()));
    }
    d.values_.resize(breaks_.size());
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) d.values_[i] = d.eval_piece(i, breaks_[i]);
    d.values_.back() = d.eval_piece(piece_count() - 1, 1.0);
    return d;
}

PiecewiseFn PiecewiseFn::reflect() const { return compose_affine(0.0, 1.0, 1.0, 0.0); }

PiecewiseFn PiecewiseFn::compose_affine(double lo, double hi, double x_lo, double x_hi) const {
    if (!(lo >= 0.0 && hi <= 1.0 && hi > lo)) throw ContractError("compose_affine: bad interval");
    if (!(x_lo >= 0.0 && x_lo <= 1.0 && x_hi >= 0.0 && x_hi <= 1.0) || x_lo == x_hi)
        throw ContractError("compose_affine: image must be a non-degenerate part of [0, 1]");
    const double s = (x_hi - x_lo) / (hi - lo);
    auto x_of = [&](double u) {
        if (u == lo) return x_lo;
        if (u == hi) return x_hi;
        return std::clamp(x_lo + s * (u - lo), 0.0, 1.0);
    };
    const double xmin = std::min(x_lo, x_hi), xmax = std::max(x_lo, x_hi);

    // Interior breakpoints of f inside the image, pulled back to u.
    std::vector<std::pair<double, double>> inner;  // (u, x)
    for (double xb : breaks_) {
        if (xb - xmin > kSnap && xmax - xb > kSnap) inner.emplace_back(lo + (xb - x_lo) / s, xb);
    }
    std::sort(inner.begin(), inner.end());

    std::vector<double> br;
    std::vector<double> xs;  // x at each breakpoint inside [lo, hi], NaN outside
    std::vector<std::vector<Term>> pieces;
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    if (lo > 0.0) {
        br.push_back(0.0);
        xs.push_back(kNaN);
        pieces.push_back({});
    }
    br.push_back(lo);
    xs.push_back(x_lo);
    for (auto [u, x] : inner) {
        if (u - br.back() <= kSnap || hi - u <= kSnap) continue;
        br.push_back(u);
        xs.push_back(x);
    }
    br.push_back(hi);
    xs.push_back(x_hi);
    if (hi < 1.0) {
        br.push_back(1.0);
        xs.push_back(kNaN);
    }
    // Pieces between lo and hi.
    const std::size_t first = lo > 0.0 ? 1 : 0;
    const std::size_t last = hi < 1.0 ? br.size() - 2 : br.size() - 1;  // index of hi
    for (std::size_t j = first; j < last; ++j) {
        const double um = 0.5 * (br[j] + br[j + 1]);
        const std::size_t pi = piece_index(x_of(um));
        std::vector<Term> ts;
        for (const Term& t : piece_terms(pi)) {
            // v = a + b x(u) = a + b (x_lo - s lo) + b s u
            ts.push_back({t.coef, t.shift + t.slope * (x_lo - s * lo), t.slope * s, t.power, t.log_power});
        }
        pieces.push_back(std::move(ts));
    }
    if (hi < 1.0) pieces.push_back({});
    std::vector<double> vals(br.size());
    for (std::size_t j = 0; j < br.size(); ++j) vals[j] = std::isnan(xs[j]) ? 0.0 : (*this)(xs[j]);
    return PiecewiseFn(std::move(br), std::move(pieces), std::move(vals));
}

PiecewiseFn PiecewiseFn::scaled(double c) const {
    PiecewiseFn out = *this;
    for (Term& t : out.terms_) t.coef *= c;
    for (double& v : out.values_) v *= c;
    return out;
}

PiecewiseFn PiecewiseFn::plus_constant(double c) const {
    return *this + constant(c);
}

PiecewiseFn operator+(const PiecewiseFn& a, const PiecewiseFn& b) {
    std::vector<double> br = merge_breaks(a.breaks_, b.breaks_);
    std::vector<std::vector<Term>> pieces(br.size() - 1);
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
        const double um = 0.5 * (br[j] + br[j + 1]);
        auto ta = a.piece_terms(a.piece_index(um));
        auto tb = b.piece_terms(b.piece_index(um));
        pieces[j].assign(ta.begin(), ta.end());
        pieces[j].insert(pieces[j].end(), tb.begin(), tb.end());
    }
    // Breakpoint values: use each operand's own breakpoint when it was snapped.
    auto at = [](const PiecewiseFn& f, double x) {
        auto it = std::lower_bound(f.breaks_.begin(), f.breaks_.end(), x - kSnap);
        if (it != f.breaks_.end() && std::abs(*it - x) <= kSnap)
            return f.values_[static_cast<std::size_t>(it - f.breaks_.begin())];
        return f(x);
    };
    std::vector<double> vals(br.size());
    for (std::size_t j = 0; j < br.size(); ++j) vals[j] = at(a, br[j]) + at(b, br[j]);
    return PiecewiseFn(std::move(br), std::move(pieces), std::move(vals));
}

PiecewiseFn operator-(const PiecewiseFn& a, const PiecewiseFn& b) { return a + b.scaled(-1.0); }

numerics::SingularityHints piece_hints(const PiecewiseFn& f, std::size_t i, double a, double b) {
    numerics::SingularityHints h;
    if (a == f.piece_lo(i)) h.lower = f.piece_exponent(i, true);
    if (b == f.piece_hi(i)) h.upper = f.piece_exponent(i, false);
    return h;
}

double PiecewiseFn::integral(double a, double b, double tol) const {
    if (a > b) return -integral(b, a, tol);
    if (a == b) return 0.0;
    double total = 0.0;
    for (std::size_t i = piece_index(a); i < piece_count() && breaks_[i] < b; ++i) {
        const double lo = std::max(a, breaks_[i]), hi = std::min(b, breaks_[i + 1]);
        if (!(hi > lo)) continue;
        auto ts = piece_terms(i);
        if (ts.empty()) continue;
        if (ts.size() == 1 && ts[0].power == 0.0 && ts[0].log_power == 0.0) {
            total += ts[0].coef * (hi - lo);
            continue;
        }
        total += numerics::integrate_anchored(
                     [&](double, double dl, double dh) { return eval_piece_near(i, dl, lo, dh, hi); },
                     lo, hi, tol, piece_hints(*this, i, lo, hi))
                     .value;
    }
    return total;
}

bool PiecewiseFn::is_continuous(double tol) const {
    return is_left_continuous(tol) && is_right_continuous(tol);
}

bool PiecewiseFn::is_left_continuous(double tol) const {
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (std::abs(values_[i] - eval_piece(i - 1, breaks_[i])) > tol) return false;
    return true;
}

bool PiecewiseFn::is_right_continuous(double tol) const {
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (std::abs(values_[i] - eval_piece(i, breaks_[i])) > tol) return false;
    return true;
}

namespace {

std::optional<double> add_exp(std::optional<double> a, std::optional<double> b) {
    if (!a && !b) return std::nullopt;
    return a.value_or(0.0) + b.value_or(0.0);
}

}  // namespace

double integrate_product(const PiecewiseFn& f, const PiecewiseFn& g, double a, double b,
                         double tol) {
    if (a >= b) return 0.0;
    std::vector<double> br = merge_breaks(f.breaks(), g.breaks());
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
        const double lo = std::max(a, br[j]), hi = std::min(b, br[j + 1]);
        if (!(hi > lo)) continue;
        const double um = 0.5 * (br[j] + br[j + 1]);
        const std::size_t i = f.piece_index(um), k = g.piece_index(um);
        if (f.piece_terms(i).empty() || g.piece_terms(k).empty()) continue;
        numerics::SingularityHints h;
        if (lo == br[j])
            h.lower = add_exp(std::abs(lo - f.piece_lo(i)) <= kSnap ? f.piece_exponent(i, true) : std::nullopt,
                              std::abs(lo - g.piece_lo(k)) <= kSnap ? g.piece_exponent(k, true) : std::nullopt);
        if (hi == br[j + 1])
            h.upper = add_exp(std::abs(hi - f.piece_hi(i)) <= kSnap ? f.piece_exponent(i, false) : std::nullopt,
                              std::abs(hi - g.piece_hi(k)) <= kSnap ? g.piece_exponent(k, false) : std::nullopt);
        total += numerics::integrate_anchored(
                     [&](double, double dl, double dh) {
                         return f.eval_piece_near(i, dl, lo, dh, hi) * g.eval_piece_near(k, dl, lo, dh, hi);
                     },
                     lo, hi, tol, h)
                     .value;
    }
    return total;
}

double integrate_weighted(const PiecewiseFn& f, const Weight& w, double a, double b, double tol) {
    if (a >= b) return 0.0;
    std::vector<double> extra = w.splits;
    extra.push_back(0.0);
    extra.push_back(1.0);
    std::sort(extra.begin(), extra.end());
    std::vector<double> br = merge_breaks(f.breaks(), extra);
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
        const double lo = std::max(a, br[j]), hi = std::min(b, br[j + 1]);
        if (!(hi > lo)) continue;
        const double um = 0.5 * (br[j] + br[j + 1]);
        const std::size_t i = f.piece_index(um);
        if (f.piece_terms(i).empty()) continue;
        numerics::SingularityHints h;
        if (lo == br[j]) {
            auto fe = std::abs(lo - f.piece_lo(i)) <= kSnap ? f.piece_exponent(i, true) : std::nullopt;
            h.lower = add_exp(fe, lo == 0.0 ? w.exponent_at_0 : std::nullopt);
        }
        if (hi == br[j + 1]) {
            auto fe = std::abs(hi - f.piece_hi(i)) <= kSnap ? f.piece_exponent(i, false) : std::nullopt;
            h.upper = add_exp(fe, hi == 1.0 ? w.exponent_at_1 : std::nullopt);
        }
        total += numerics::integrate_anchored(
                     [&](double u, double dl, double dh) {
                         const double one_minus_u = dh <= dl ? (1.0 - hi) + dh : 1.0 - u;
                         return f.eval_piece_near(i, dl, lo, dh, hi) * w.h(u, one_minus_u);
                     },
                     lo, hi, tol, h)
                     .value;
    }
    return total;
}

}  // namespace riskbound
