#pragma once

#include "riskbound/bounds.hpp"
#include "riskbound/catalog.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace riskbound {

// {"measure":"GS","p":0.95,"tau":0.25}; unknown keys are rejected.
MeasureId measure_from_json(const std::string& text);
std::string measure_to_json(const MeasureId& id);

enum class VarianceConvention { Population, Sample };

struct IngestResult {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    MomentInfo moments() const;
};

// Numeric column by header name or 0-based index. A header row is detected
// when the first line's target field is not a number.
IngestResult ingest_returns(const std::string& path, const std::string& column,
                            VarianceConvention conv = VarianceConvention::Population, char delimiter = ',');

// How table cells are computed.
//   Reference: reference closed forms where they exist, engines in reference_mode otherwise
//   Atoms:   engines only, atoms of d(hat g_*)' included
//   Density: engines only, density part only
enum class TableMode { Reference, Atoms, Density };
TableMode table_mode_from_name(const std::string& s);

struct TableCell {
    ShapeClass shape;
    double p;
    std::optional<double> lower;
    std::optional<double> upper;
    bool sharp = false;
    std::string source;  // "closed-form", "engine" or "n/a"
    std::string note;
};

struct Table {
    MeasureId base;
    std::vector<double> p_list;
    std::vector<ShapeClass> shapes;
    std::vector<TableCell> cells;  // shape-major
};

// One cell per (shape, p); the measure's p is overwritten by each p in the list.
// Unsupported or invalid cells are marked "n/a" rather than aborting.
Table run_table(const MeasureId& base, const std::vector<ShapeClass>& shapes, const std::vector<double>& p_list,
                const MomentInfo& m, TableMode mode = TableMode::Reference);

// header: shape,p,bound_lower,bound_upper,sharp
std::string table_to_csv(const Table& t, int precision = 6);
// Upper bounds, shapes as rows and p as columns.
std::string table_to_markdown(const Table& t, int precision = 6);

struct TableConfig {
    MeasureId measure;
    std::vector<double> p_list;
    std::vector<ShapeClass> shapes;
    MomentInfo moments;
    TableMode mode = TableMode::Reference;
};
// {measure, params, p_list, shapes, mu, sigma2 | csv + column, mode}. Relative
// csv paths resolve against base_dir.
TableConfig table_config_from_json(const std::string& text, const std::string& base_dir = ".");

}  // namespace riskbound
