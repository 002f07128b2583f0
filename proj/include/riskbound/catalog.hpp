#pragma once

#include "riskbound/bounds.hpp"
#include "riskbound/distortion.hpp"
#include "riskbound/envelope.hpp"
#include "riskbound/quantile.hpp"

#include <optional>
#include <string>
#include <vector>

namespace riskbound {

enum class MeasureKind { CT, Gini, FGRE, CRE, EGS, GS, ES, ESn, DualPower, PropHazard };

// A named measure plus its parameters. Only the fields a kind uses matter.
struct MeasureId {
    MeasureKind kind = MeasureKind::ES;
    double alpha = 2.0;  // CT, FGRE
    double p = 0.95;     // EGS, GS, ES, ESn
    double tau = 0.0;    // EGS, GS
    double r = 2.0;      // EGS
    double n = 1.0;      // ESn (integer), DualPower (real >= 1)
    double gamma = 0.5;  // PropHazard

    static MeasureId ct(double alpha);
    static MeasureId gini();
    static MeasureId fgre(double alpha);
    static MeasureId cre();
    static MeasureId egs(double p, double tau, double r);
    static MeasureId gs(double p, double tau);
    static MeasureId es(double p);
    static MeasureId es_n(int n, double p);
    static MeasureId dual_power(double n);
    static MeasureId prop_hazard(double gamma);

    std::string label() const;  // e.g. "GS(p=0.95,tau=0.25)"
};

const char* measure_kind_name(MeasureKind k);
MeasureKind measure_kind_from_name(const std::string& s);

// Throws DomainError when a parameter is outside the measure's domain.
void validate(const MeasureId& id);

// Mode the reference formulas use for Theta and Delta.
AtomMode reference_mode(const MeasureId& id);

// hat side of the measure, with flags and, where known, its analytic envelope.
Distortion make_distortion(const MeasureId& id);
// The distortion g itself, i.e. hat of make_distortion.
Distortion make_g(const MeasureId& id);

struct ClosedForm {
    std::optional<double> lower;
    std::optional<double> upper;
    bool equality = false;  // reference as a sharp value (lower == upper)
};

// The reference closed form for (measure, shape). Throws UnsupportedError when no
// formula exists and DomainError when the formula's stated range is violated.
ClosedForm closed_form_bound(const MeasureId& id, ShapeClass shape, const MomentInfo& m);
bool has_closed_form(const MeasureId& id, ShapeClass shape);

enum class RootKind { b0, b1, b2, u0 };
RootKind root_kind_from_name(const std::string& s);

// Smallest root of the named equation inside its bracket, or nullopt.
std::optional<double> solve_example_root(const MeasureId& id, RootKind which);
// Every root inside the bracket (grid scan plus Brent), ascending.
std::vector<double> solve_example_roots(const MeasureId& id, RootKind which);

// One representative per kind, used by the sweeps in tests and the oracle.
std::vector<MeasureId> default_catalog();

}  // namespace riskbound
