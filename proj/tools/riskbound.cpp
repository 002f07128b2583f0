#include "riskbound/catalog.hpp"
#include "riskbound/cli.hpp"
#include "riskbound/errors.hpp"
#include "riskbound/oracle.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace riskbound;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --measure takes inline JSON or a path to a JSON file
MeasureId load_measure(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return measure_from_json(arg);
    return measure_from_json(read_file(arg));
}

std::vector<ShapeClass> shapes_arg(const std::string& s) {
    if (s == "all")
        return {ShapeClass::General, ShapeClass::Unimodal, ShapeClass::Symmetric, ShapeClass::SymmetricUnimodal};
    return {shape_from_name(s)};
}

std::string num(double x, int prec) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << x;
    return os.str();
}

AtomMode atom_mode(const std::string& s, const MeasureId& id) {
    if (s == "atoms") return AtomMode::IncludeAtoms;
    if (s == "density") return AtomMode::DensityOnly;
    if (s == "reference") return reference_mode(id);
    throw DomainError("unknown mode '" + s + "' (atoms, density, reference)");
}

void warn_if_inverted(double lo, double up, const std::string& what) {
    if (up < lo - 1e-9 * std::max(1.0, std::abs(lo)))
        std::cerr << "warning: " << what << ": upper bound " << up << " is below the attainable lower value " << lo
                  << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"worst-case distortion riskmetric bounds under mean, variance and shape constraints"};
    app.require_subcommand(1);
    int precision = 6;
    app.add_option("--precision", precision, "digits after the decimal point")->check(CLI::Range(0, 17));

    // bounds
    auto* b = app.add_subcommand("bounds", "lower/upper bounds for one measure");
    std::string b_measure, b_shape = "all", b_mode = "atoms", b_weighted;
    double b_mu = 0.0, b_sigma = 1.0;
    bool b_cf = false;
    b->add_option("--measure", b_measure, "measure JSON, inline or a file")->required();
    b->add_option("--shape", b_shape, "general|unimodal|symmetric|symmetric-unimodal|all");
    b->add_option("--mu", b_mu, "mean");
    b->add_option("--sigma", b_sigma, "standard deviation")->check(CLI::NonNegativeNumber);
    b->add_option("--mode", b_mode, "atoms|density|reference");
    b->add_option("--weighted", b_weighted, "psi=<identity|half_square|exp>; mu and sigma are then moments of Psi(X)");
    b->add_flag("--closed-form", b_cf, "also print the catalog closed form");

    // table
    auto* t = app.add_subcommand("table", "table of bounds over shapes and p");
    std::string t_config, t_format = "both", t_out;
    t->add_option("--config", t_config, "table config JSON file")->required();
    t->add_option("--format", t_format, "csv|markdown|both")->check(CLI::IsMember({"csv", "markdown", "both"}));
    t->add_option("--out", t_out, "write CSV here instead of stdout");

    // ingest
    auto* in = app.add_subcommand("ingest", "mean and variance of a return series");
    std::string i_csv, i_column = "0", i_var = "population", i_delim = ",";
    in->add_option("--csv", i_csv, "CSV file")->required();
    in->add_option("--column", i_column, "column name or 0-based index");
    in->add_option("--variance", i_var, "population|sample")->check(CLI::IsMember({"population", "sample"}));
    in->add_option("--delimiter", i_delim, "field separator");

    // oracle
    auto* o = app.add_subcommand("oracle", "brute-force check against random feasible quantiles");
    std::string o_measure, o_shape = "all";
    int o_trials = 1000, o_grid = 257;
    std::uint64_t o_seed = 1;
    double o_mu = 0.0, o_sigma = 1.0;
    o->add_option("--measure", o_measure, "measure JSON, inline or a file")->required();
    o->add_option("--shape", o_shape, "shape or all");
    o->add_option("--trials", o_trials, "random quantiles per shape")->check(CLI::PositiveNumber);
    o->add_option("--seed", o_seed, "RNG seed");
    o->add_option("--b-grid", o_grid, "family scan resolution")->check(CLI::Range(2, 1 << 20));
    o->add_option("--mu", o_mu, "mean");
    o->add_option("--sigma", o_sigma, "standard deviation")->check(CLI::NonNegativeNumber);

    // envelope
    auto* e = app.add_subcommand("envelope", "dump hat g and its convex envelope");
    std::string e_measure, e_dump;
    int e_points = 1001;
    e->add_option("--measure", e_measure, "measure JSON, inline or a file")->required();
    e->add_option("--dump", e_dump, "output CSV path")->required();
    e->add_option("--points", e_points, "grid size")->check(CLI::Range(2, 10'000'000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return 2;
    }

    try {
        if (*b) {
            const MeasureId id = load_measure(b_measure);
            const Distortion g = make_g(id);
            const AtomMode mode = atom_mode(b_mode, id);
            const MomentInfo m{b_mu, b_sigma};
            std::cout << "measure: " << id.label() << '\n';
            for (ShapeClass s : shapes_arg(b_shape)) {
                BoundResult r;
                if (!b_weighted.empty()) {
                    const auto eq = b_weighted.find('=');
                    const std::string key = b_weighted.substr(0, eq == std::string::npos ? 0 : eq);
                    if (eq == std::string::npos || key != "psi")
                        throw DomainError("--weighted expects psi=<id>");
                    r = bound_weighted(g, WeightSpec::by_name(b_weighted.substr(eq + 1)), m, s, mode).psi_space;
                } else {
                    r = compute_bound(s, g, m, mode);
                }
                std::cout << shape_name(s) << ": lower " << num(r.lower, precision) << " upper "
                          << num(r.upper, precision) << (r.sharp ? " sharp" : "");
                if (r.b_star) std::cout << " b* " << num(*r.b_star, precision);
                if (r.family) std::cout << " family " << family_name(*r.family);
                std::cout << '\n';
                warn_if_inverted(r.family_value, r.upper, shape_name(s));
                if (b_cf) {
                    if (!has_closed_form(id, s)) {
                        std::cout << "  closed form: n/a\n";
                    } else {
                        const ClosedForm cf = closed_form_bound(id, s, m);
                        std::cout << "  closed form: lower " << (cf.lower ? num(*cf.lower, precision) : "n/a")
                                  << " upper " << (cf.upper ? num(*cf.upper, precision) : "n/a")
                                  << (cf.equality ? " (stated as sharp)" : "") << '\n';
                    }
                }
            }
        } else if (*t) {
            const std::string dir = std::filesystem::path(t_config).parent_path().string();
            const TableConfig cfg = table_config_from_json(read_file(t_config), dir.empty() ? "." : dir);
            const Table tab = run_table(cfg.measure, cfg.shapes, cfg.p_list, cfg.moments, cfg.mode);
            for (const TableCell& c : tab.cells) {
                if (c.note == "upper below lower")
                    std::cerr << "warning: " << shape_name(c.shape) << " p=" << c.p
                              << ": upper bound is below the lower bound\n";
                else if (!c.note.empty())
                    std::cerr << "note: " << shape_name(c.shape) << " p=" << c.p << ": " << c.note << '\n';
            }
            const std::string csv = table_to_csv(tab, precision);
            if (t_format != "markdown") {
                if (t_out.empty()) {
                    std::cout << csv;
                } else {
                    std::ofstream out(t_out);
                    if (!out) throw DomainError("cannot write " + t_out);
                    out << csv;
                }
            }
            if (t_format != "csv") {
                if (t_format == "both" && t_out.empty()) std::cout << '\n';
                std::cout << table_to_markdown(tab, precision);
            }
        } else if (*in) {
            if (i_delim.size() != 1) throw DomainError("--delimiter must be one character");
            const IngestResult r = ingest_returns(
                i_csv, i_column, i_var == "sample" ? VarianceConvention::Sample : VarianceConvention::Population,
                i_delim[0]);
            std::cout << "n: " << r.n << "\nmu: " << num(r.mean, 9) << "\nsigma2: " << num(r.variance, 9)
                      << "\nsigma: " << num(std::sqrt(r.variance), 9) << '\n';
        } else if (*o) {
            const MeasureId id = load_measure(o_measure);
            const Distortion g = make_g(id);
            const MomentInfo m{o_mu, o_sigma};
            std::cout << "measure: " << id.label() << '\n';
            for (ShapeClass s : shapes_arg(o_shape)) {
                const BoundResult r = compute_bound(s, g, m);
                const OracleMax mx = random_feasible_max(s, g, m, o_trials, o_seed);
                std::cout << shape_name(s) << ": random max " << num(mx.value, precision) << " (trial "
                          << mx.best_trial << ") engine upper " << num(r.upper, precision);
                if (s == ShapeClass::Unimodal || s == ShapeClass::SymmetricUnimodal) {
                    double fam = 0.0;
                    if (s == ShapeClass::Unimodal)
                        fam = std::max(family_sup(Family::UR, g, m, o_grid).value,
                                       family_sup(Family::UL, g, m, o_grid).value);
                    else
                        fam = family_sup(Family::S, g, m, o_grid).value;
                    std::cout << " family sup " << num(fam, precision) << " engine lower "
                              << num(r.family_value, precision);
                }
                const bool ok = mx.value <= r.upper + 1e-8;
                std::cout << (ok ? " ok" : " VIOLATION") << '\n';
            }
        } else if (*e) {
            const MeasureId id = load_measure(e_measure);
            const Distortion hg = make_distortion(id);
            const PiecewiseFn env = convex_envelope(hg);
            const PiecewiseFn denv = env.derivative();
            std::ofstream out(e_dump);
            if (!out) throw DomainError("cannot write " + e_dump);
            out << "u,hat_g,hat_g_env,hat_g_env_deriv\n" << std::setprecision(17);
            for (int i = 0; i < e_points; ++i) {
                const double u = static_cast<double>(i) / (e_points - 1);
                // the slope can blow up at 1; report the last finite one
                const double du = i + 1 == e_points ? denv(std::nextafter(1.0, 0.0)) : denv(u);
                out << u << ',' << hg(u) << ',' << env(u) << ',' << du << '\n';
            }
            std::cout << "wrote " << e_points << " rows to " << e_dump << '\n';
        }
    } catch (const NumericError& ex) {
        std::cerr << "numeric error: " << ex.what() << '\n';
        return 3;
    } catch (const DomainError& ex) {
        std::cerr << "domain error: " << ex.what() << '\n';
        return 2;
    } catch (const ContractError& ex) {
        std::cerr << "domain error: " << ex.what() << '\n';
        return 2;
    } catch (const UnsupportedError& ex) {
        std::cerr << "unsupported: " << ex.what() << '\n';
        return 2;
    }
    return 0;
}
