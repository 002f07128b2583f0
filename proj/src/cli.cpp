#include "riskbound/cli.hpp"

#include "riskbound/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace riskbound {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad JSON: ") + e.what());
    }
}

double num(const json& j, const char* key) {
    if (!j.at(key).is_number()) throw DomainError(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

void apply_params(MeasureId& id, const json& j, bool allow_extra) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "measure" || k == "params") continue;
        if (k == "alpha") id.alpha = num(j, "alpha");
        else if (k == "p") id.p = num(j, "p");
        else if (k == "tau") id.tau = num(j, "tau");
        else if (k == "r") id.r = num(j, "r");
        else if (k == "n") id.n = num(j, "n");
        else if (k == "gamma") id.gamma = num(j, "gamma");
        else if (!allow_extra) throw DomainError("unknown measure key '" + k + "'");
    }
}

MeasureId measure_from(const json& j, bool allow_extra) {
    if (!j.is_object() || !j.contains("measure") || !j["measure"].is_string())
        throw DomainError("measure JSON needs a string field 'measure'");
    MeasureId id;
    id.kind = measure_kind_from_name(j["measure"].get<std::string>());
    if (id.kind == MeasureKind::Gini) id.alpha = 2.0;
    if (id.kind == MeasureKind::CRE) id.alpha = 1.0;
    apply_params(id, j, allow_extra);
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw DomainError("'params' must be an object");
        apply_params(id, j["params"], false);
    }
    validate(id);
    return id;
}

std::string trim(std::string s) {
    const char* ws = " \t\r\n\"";
    s.erase(0, s.find_first_not_of(ws));
    const auto e = s.find_last_not_of(ws);
    s.erase(e == std::string::npos ? 0 : e + 1);
    return s;
}

std::optional<double> parse_number(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    const char* b = t.data() + (t[0] == '+' ? 1 : 0);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> split(const std::string& line, char d) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == d) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string fmt(double x, int precision) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << x;
    return os.str();
}

}  // namespace

MeasureId measure_from_json(const std::string& text) { return measure_from(parse_json(text), false); }

std::string measure_to_json(const MeasureId& id) {
    json j;
    j["measure"] = measure_kind_name(id.kind);
    switch (id.kind) {
    case MeasureKind::CT:
    case MeasureKind::FGRE: j["alpha"] = id.alpha; break;
    case MeasureKind::Gini:
    case MeasureKind::CRE: break;
    case MeasureKind::EGS:
        j["p"] = id.p;
        j["tau"] = id.tau;
        j["r"] = id.r;
        break;
    case MeasureKind::GS:
        j["p"] = id.p;
        j["tau"] = id.tau;
        break;
    case MeasureKind::ES: j["p"] = id.p; break;
    case MeasureKind::ESn:
        j["n"] = id.n;
        j["p"] = id.p;
        break;
    case MeasureKind::DualPower: j["n"] = id.n; break;
    case MeasureKind::PropHazard: j["gamma"] = id.gamma; break;
    }
    return j.dump();
}

MomentInfo IngestResult::moments() const { return {mean, std::sqrt(variance)}; }

IngestResult ingest_returns(const std::string& path, const std::string& column, VarianceConvention conv,
                            char delimiter) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);

    const auto idx_by_number = parse_number(column);
    std::size_t col = 0;
    std::size_t first = 0;
    if (lines.empty()) throw DomainError(path + ": empty file");
    const auto head = split(lines[0], delimiter);
    if (idx_by_number && *idx_by_number >= 0 && std::floor(*idx_by_number) == *idx_by_number) {
        col = static_cast<std::size_t>(*idx_by_number);
        if (col < head.size() && !parse_number(head[col])) first = 1;
    } else {
        std::size_t k = 0;
        for (; k < head.size(); ++k)
            if (trim(head[k]) == column) break;
        if (k == head.size()) throw DomainError(path + ": no column named '" + column + "'");
        col = k;
        first = 1;
    }

    std::vector<double> xs;
    std::vector<std::size_t> bad;
    for (std::size_t i = first; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = split(lines[i], delimiter);
        std::optional<double> v = col < f.size() ? parse_number(f[col]) : std::nullopt;
        if (!v) bad.push_back(i + 1);
        else xs.push_back(*v);
    }
    if (!bad.empty()) {
        std::string msg = path + ": unparsable value on line";
        msg += bad.size() > 1 ? "s" : "";
        for (std::size_t k = 0; k < bad.size() && k < 20; ++k) msg += (k ? ", " : " ") + std::to_string(bad[k]);
        if (bad.size() > 20) msg += ", ...";
        throw DomainError(msg);
    }
    if (xs.size() < 2) throw DomainError(path + ": need at least 2 observations");

    IngestResult r;
    r.n = xs.size();
    double s = 0.0;
    for (double x : xs) s += x;
    r.mean = s / static_cast<double>(r.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.variance = ss / static_cast<double>(conv == VarianceConvention::Sample ? r.n - 1 : r.n);
    return r;
}

TableMode table_mode_from_name(const std::string& s) {
    if (s == "reference") return TableMode::Reference;
    if (s == "atoms" || s == "include_atoms") return TableMode::Atoms;
    if (s == "density" || s == "density_only") return TableMode::Density;
    throw DomainError("unknown table mode '" + s + "' (reference, atoms, density)");
}

Table run_table(const MeasureId& base, const std::vector<ShapeClass>& shapes, const std::vector<double>& p_list,
                const MomentInfo& m, TableMode mode) {
    Table t{base, p_list, shapes, {}};
    for (ShapeClass s : shapes) {
        for (double p : p_list) {
            TableCell c{s, p, std::nullopt, std::nullopt, false, "n/a", ""};
            MeasureId id = base;
            id.p = p;
            try {
                validate(id);
                if (mode == TableMode::Reference && has_closed_form(id, s)) {
                    const ClosedForm cf = closed_form_bound(id, s, m);
                    c.lower = cf.lower;
                    c.upper = cf.upper;
                    c.sharp = cf.equality;
                    c.source = "closed-form";
                    if (cf.equality && cf.upper && s != ShapeClass::General) {
                        const double gen = bound_general(make_g(id), m).upper;
                        if (*cf.upper > gen + 1e-9 * std::max(1.0, std::abs(gen)))
                            c.note = "reference sharp value exceeds the general bound";
                    }
                } else {
                    const AtomMode am = mode == TableMode::Reference   ? reference_mode(id)
                                        : mode == TableMode::Atoms ? AtomMode::IncludeAtoms
                                                                   : AtomMode::DensityOnly;
                    const BoundResult b = compute_bound(s, make_g(id), m, am);
                    c.lower = b.lower;
                    c.upper = b.upper;
                    c.sharp = b.sharp;
                    c.source = "engine";
                }
                if (c.lower && c.upper && *c.upper < *c.lower - 1e-9 * std::max(1.0, std::abs(*c.lower)))
                    c.note = "upper below lower";
            } catch (const UnsupportedError& e) {
                c.note = e.what();
            } catch (const DomainError& e) {
                c.note = e.what();
            }
            t.cells.push_back(c);
        }
    }
    return t;
}

std::string table_to_csv(const Table& t, int precision) {
    std::ostringstream os;
    os << "shape,p,bound_lower,bound_upper,sharp\n";
    for (const TableCell& c : t.cells) {
        os << shape_name(c.shape) << ',' << fmt(c.p, 2) << ',' << (c.lower ? fmt(*c.lower, precision) : "n/a")
           << ',' << (c.upper ? fmt(*c.upper, precision) : "n/a") << ',' << (c.sharp ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string table_to_markdown(const Table& t, int precision) {
    std::ostringstream os;
    os << "| shape |";
    for (double p : t.p_list) os << ' ' << fmt(p, 2) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < t.p_list.size(); ++i) os << "---:|";
    os << '\n';
    std::size_t k = 0;
    for (ShapeClass s : t.shapes) {
        os << "| " << shape_name(s) << " |";
        for (std::size_t i = 0; i < t.p_list.size(); ++i, ++k) {
            const TableCell& c = t.cells[k];
            os << ' ' << (c.upper ? fmt(*c.upper, precision) : "n/a") << " |";
        }
        os << '\n';
    }
    return os.str();
}

TableConfig table_config_from_json(const std::string& text, const std::string& base_dir) {
    const json j = parse_json(text);
    TableConfig cfg;
    cfg.measure = measure_from(j, true);
    if (!j.contains("p_list") || !j["p_list"].is_array() || j["p_list"].empty())
        throw DomainError("table config needs a non-empty 'p_list'");
    for (const auto& p : j["p_list"]) {
        if (!p.is_number()) throw DomainError("'p_list' entries must be numbers");
        cfg.p_list.push_back(p.get<double>());
    }
    if (j.contains("shapes")) {
        for (const auto& s : j["shapes"]) cfg.shapes.push_back(shape_from_name(s.get<std::string>()));
    } else {
        cfg.shapes = {ShapeClass::General, ShapeClass::Unimodal, ShapeClass::Symmetric,
                      ShapeClass::SymmetricUnimodal};
    }
    if (j.contains("mode")) cfg.mode = table_mode_from_name(j["mode"].get<std::string>());
    if (j.contains("csv")) {
        std::filesystem::path p = j["csv"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        const std::string column = j.contains("column") ? (j["column"].is_string() ? j["column"].get<std::string>()
                                                                                   : j["column"].dump())
                                                            : "0";
        VarianceConvention conv = VarianceConvention::Population;
        if (j.contains("variance") && j["variance"].get<std::string>() == "sample") conv = VarianceConvention::Sample;
        cfg.moments = ingest_returns(p.string(), column, conv).moments();
    } else {
        if (!j.contains("mu") || !j.contains("sigma2")) throw DomainError("table config needs mu and sigma2, or csv");
        const double s2 = num(j, "sigma2");
        if (!(s2 >= 0.0)) throw DomainError("sigma2 must be non-negative");
        cfg.moments = {num(j, "mu"), std::sqrt(s2)};
    }
    return cfg;
}

}  // namespace riskbound
