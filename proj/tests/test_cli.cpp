#include "riskbound/cli.hpp"
#include "riskbound/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace riskbound;
namespace fs = std::filesystem;

namespace {

// temp file removed on scope exit
struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& content) {
        path = fs::temp_directory_path() / ("riskbound_test_" + std::to_string(counter()++) + ".csv");
        std::ofstream(path) << content;
    }
    ~TempFile() { fs::remove(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

}  // namespace

TEST(MeasureJson, ParseAndRoundTrip) {
    const MeasureId gs = measure_from_json(R"({"measure":"GS","p":0.95,"tau":0.25})");
    EXPECT_EQ(gs.kind, MeasureKind::GS);
    EXPECT_EQ(gs.p, 0.95);
    EXPECT_EQ(gs.tau, 0.25);
    const MeasureId nested = measure_from_json(R"({"measure":"CT","params":{"alpha":3}})");
    EXPECT_EQ(nested.alpha, 3.0);
    for (const MeasureId& id : default_catalog()) {
        const MeasureId back = measure_from_json(measure_to_json(id));
        EXPECT_EQ(back.label(), id.label());
    }
}

TEST(MeasureJson, Errors) {
    EXPECT_THROW(measure_from_json(R"({"measure":"GS","p":0.95,"bogus":1})"), DomainError);
    EXPECT_THROW(measure_from_json(R"({"p":0.95})"), DomainError);
    EXPECT_THROW(measure_from_json("{not json"), DomainError);
    EXPECT_THROW(measure_from_json(R"({"measure":"ES","p":1.5})"), DomainError);
    EXPECT_THROW(measure_from_json(R"({"measure":"Nope"})"), DomainError);
}

TEST(Ingest, PopulationAndSample) {
    TempFile f("r\n1\n2\n3\n");
    const IngestResult p = ingest_returns(f.path.string(), "r");
    EXPECT_EQ(p.n, 3u);
    EXPECT_NEAR(p.mean, 2.0, 1e-15);
    EXPECT_NEAR(p.variance, 2.0 / 3.0, 1e-15);
    const IngestResult s = ingest_returns(f.path.string(), "r", VarianceConvention::Sample);
    EXPECT_NEAR(s.variance, 1.0, 1e-15);
    EXPECT_NEAR(s.moments().sigma, 1.0, 1e-15);
    EXPECT_NEAR(p.moments().mu, 2.0, 1e-15);
}

TEST(Ingest, ColumnIndexAndDelimiter) {
    TempFile noheader("a;1.5\nb;2.5\n");
    const IngestResult r = ingest_returns(noheader.path.string(), "1", VarianceConvention::Population, ';');
    EXPECT_EQ(r.n, 2u);
    EXPECT_NEAR(r.mean, 2.0, 1e-15);
    EXPECT_NEAR(r.variance, 0.25, 1e-15);
}

TEST(Ingest, BadLinesAreListed) {
    TempFile f("r\n1\nx\n2\n\n?\n");
    try {
        ingest_returns(f.path.string(), "r");
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        const std::string w = e.what();
        EXPECT_NE(w.find("lines 3, 6"), std::string::npos) << w;
    }
    TempFile one("r\n1\n");
    EXPECT_THROW(ingest_returns(one.path.string(), "r"), DomainError);
    EXPECT_THROW(ingest_returns(f.path.string(), "missing"), DomainError);
    EXPECT_THROW(ingest_returns("/nonexistent/file.csv", "r"), DomainError);
}

TEST(Table, ReferenceModeReproducesTableOneRow) {
    const MomentInfo m{0.052128514, std::sqrt(0.416460169)};
    const Table t = run_table(MeasureId::gs(0.95, 0.25),
                              {ShapeClass::General, ShapeClass::Unimodal, ShapeClass::Symmetric,
                               ShapeClass::SymmetricUnimodal},
                              {0.95}, m, TableMode::Reference);
    ASSERT_EQ(t.cells.size(), 4u);
    EXPECT_NEAR(*t.cells[0].upper, 2.985871, 1e-6);
    EXPECT_NEAR(*t.cells[1].upper, 1.83519, 1e-5);
    EXPECT_NEAR(*t.cells[2].upper, 2.176193, 1e-6);
    EXPECT_NEAR(*t.cells[3].upper, 1.334811, 1e-6);
    EXPECT_EQ(t.cells[0].source, "engine");
    EXPECT_EQ(t.cells[1].source, "closed-form");
    const std::string csv = table_to_csv(t);
    EXPECT_EQ(csv.rfind("shape,p,bound_lower,bound_upper,sharp\n", 0), 0u);
    EXPECT_NE(csv.find("general,0.95,2.985871,2.985871,true"), std::string::npos) << csv;
    const std::string md = table_to_markdown(t);
    EXPECT_EQ(md.rfind("| shape | 0.95 |", 0), 0u) << md;
    EXPECT_NE(md.find("| symmetric-unimodal | 1.334811 |"), std::string::npos) << md;
}

TEST(Table, InvalidCellsAreNa) {
    // p = 1 is outside the ES domain
    const Table t = run_table(MeasureId::es(0.9), {ShapeClass::General}, {0.5, 1.0}, {0.0, 1.0}, TableMode::Atoms);
    ASSERT_EQ(t.cells.size(), 2u);
    EXPECT_EQ(t.cells[0].source, "engine");
    EXPECT_EQ(t.cells[1].source, "n/a");
    EXPECT_FALSE(t.cells[1].upper);
    EXPECT_NE(table_to_csv(t).find("general,1.00,n/a,n/a,false"), std::string::npos) << table_to_csv(t);
    // no reference formula for dual power: reference mode falls back to the engine
    const Table d = run_table(MeasureId::dual_power(3.0), {ShapeClass::Unimodal}, {0.5}, {0.0, 1.0});
    EXPECT_EQ(d.cells[0].source, "engine");
}

TEST(Table, ReferenceSharpAboveGeneralIsNoted) {
    const Table t = run_table(MeasureId::es_n(3, 0.8), {ShapeClass::Unimodal}, {0.8}, {0.0, 1.0});
    EXPECT_EQ(t.cells[0].note, "reference sharp value exceeds the general bound");
}

TEST(Table, ModesAndConfig) {
    EXPECT_EQ(table_mode_from_name("density"), TableMode::Density);
    EXPECT_EQ(table_mode_from_name("atoms"), TableMode::Atoms);
    EXPECT_THROW(table_mode_from_name("x"), DomainError);
    const TableConfig c = table_config_from_json(
        R"({"measure":"GS","params":{"tau":0.25},"p_list":[0.9,0.95],"shapes":["general","unimodal"],"mu":0.1,"sigma2":0.25,"mode":"atoms"})");
    EXPECT_EQ(c.p_list.size(), 2u);
    EXPECT_EQ(c.shapes[1], ShapeClass::Unimodal);
    EXPECT_NEAR(c.moments.sigma, 0.5, 1e-15);
    EXPECT_EQ(c.mode, TableMode::Atoms);
    EXPECT_THROW(table_config_from_json(R"({"measure":"GS","params":{"tau":0.25},"mu":0,"sigma2":1})"), DomainError);
}

TEST(Table, ConfigFromCsvResolvesRelativePath) {
    TempFile f("r\n0\n2\n");
    const std::string cfg = R"({"measure":"ES","p_list":[0.9],"shapes":["general"],"csv":")" +
                            f.path.filename().string() + R"(","column":"r"})";
    const TableConfig c = table_config_from_json(cfg, f.path.parent_path().string());
    EXPECT_NEAR(c.moments.mu, 1.0, 1e-15);
    EXPECT_NEAR(c.moments.sigma, 1.0, 1e-15);
}

TEST(Table, ShippedConfigsParse) {
    const char* src = std::getenv("RISKBOUND_SOURCE_DIR");
    if (!src) GTEST_SKIP() << "RISKBOUND_SOURCE_DIR not set";
    for (int i = 1; i <= 3; ++i) {
        const fs::path p = fs::path(src) / "tools" / "tables" / ("table" + std::to_string(i) + ".json");
        std::ifstream in(p);
        ASSERT_TRUE(in) << p;
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const TableConfig c = table_config_from_json(text, p.parent_path().string());
        EXPECT_EQ(c.p_list.size(), 5u);
        EXPECT_EQ(c.shapes.size(), 4u);
        EXPECT_EQ(c.mode, TableMode::Reference);
    }
}
