#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "helpers.hpp"
#include "lomef/config.hpp"
#include "lomef/pipeline.hpp"
#include "lomef/plot.hpp"
#include "lomef/report.hpp"
#include "lomef/synthetic.hpp"

using namespace lomef;
namespace fs = std::filesystem;

namespace {

SeriesSet small_panel() {
    return make_synthetic_set({.n_series = 6, .length = 60, .period = 6, .horizon = 6});
}

RunConfig small_config() {
    RunConfig c;
    c.dataset = "inline";
    c.methods = {NeighbourhoodMethod::NF, NeighbourhoodMethod::NSTL, NeighbourhoodMethod::NSIEVE};
    c.explainers = {ExplainerKind::ETS, ExplainerKind::AR, ExplainerKind::PR};
    c.bootstraps = 8;
    c.seed = 3;
    c.threads = 1;
    return c;
}

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("lomef_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LOMEF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("pipeline output is deterministic and independent of threads") {
    const auto data = small_panel();
    RunConfig config = small_config();
    const auto a = run_pipeline(config, data);
    const auto b = run_pipeline(config, data);
    config.threads = 3;
    const auto c = run_pipeline(config, data);

    CHECK(a.errors.size() == 6);
    for (const auto& e : a.errors) CHECK(e.find("NF/PR: not applicable") != std::string::npos);
    CHECK(a.records.size() == 6 * 3 * 3 * 3 - 6 * 3);  // PR is not applicable under NF
    CHECK(records_csv(a.records) == records_csv(b.records));
    CHECK(records_csv(a.records) == records_csv(c.records));
    CHECK(aggregate_csv(a.aggregate) == aggregate_csv(c.aggregate));
    CHECK(a.significance_level == doctest::Approx(0.05 / (3 * 3 * 6)));
}

TEST_CASE("the oracle stub makes NF explainers match the local model") {
    const auto data = small_panel();
    RunConfig config = small_config();
    config.gfm = GfmKind::OracleStub;
    config.methods = {NeighbourhoodMethod::NF};
    config.explainers = {ExplainerKind::ETS, ExplainerKind::THETA, ExplainerKind::AR};
    const auto result = run_pipeline(config, data);
    CHECK(result.records.size() == 6 * 3 * 3);
    for (const auto& r : result.records) CHECK(r.secondary.fidelity_local == 0.0);
}

TEST_CASE("NF is perfectly stable across runs") {
    const auto data = small_panel();
    RunConfig config = small_config();
    config.methods = {NeighbourhoodMethod::NF, NeighbourhoodMethod::NSTL};
    config.explainers = {ExplainerKind::AR};
    const auto result = run_stability(config, data, 4);
    REQUIRE(result.rows.size() == 2 * 3);
    for (const auto& row : result.rows) {
        CHECK(row.run_medians.size() == 4);
        if (row.method == NeighbourhoodMethod::NF) CHECK(row.iqr == 0.0);
    }
    const std::string csv = stability_csv(result.rows);
    CHECK(count(csv, "\n") == 7);
}

TEST_CASE("series artifacts round-trip") {
    const auto result = run_pipeline(small_config(), small_panel());
    const auto& s = result.series[2];
    const auto back = series_from_artifact(series_artifact(s));
    CHECK(back.id == s.id);
    CHECK(back.train == s.train);
    CHECK(back.global_forecast == s.global_forecast);
    REQUIRE(back.outcomes.size() == s.outcomes.size());
    CHECK(back.outcomes[1].explainer.forecast == s.outcomes[1].explainer.forecast);
    CHECK(series_artifact(back).dump() == series_artifact(s).dump());
}

TEST_CASE("bundle files") {
    const fs::path dir = fresh_dir("bundle");
    const auto result = run_pipeline(small_config(), small_panel());
    write_bundle(result, dir.string(), true);
    CHECK(fs::exists(dir / "records.csv"));
    CHECK(fs::exists(dir / "aggregate.csv"));
    CHECK(fs::exists(dir / "errors.log"));
    CHECK(fs::exists(dir / "series" / (result.series[0].id + ".json")));
    const std::string aggregate = slurp(dir / "aggregate.csv");
    CHECK(aggregate.rfind("explainer,method,metric,statistic,n,Fidelity_Actual", 0) == 0);
    CHECK(aggregate.find("Acc_Explainer_GlobalModel_significant") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("plots") {
    RunConfig config = small_config();
    config.explainers = {ExplainerKind::MSTL_ETS, ExplainerKind::PR, ExplainerKind::ETS};
    config.methods = {NeighbourhoodMethod::NSTL};
    const auto result = run_pipeline(config, small_panel());
    const auto& series = result.series[0];
    REQUIRE(series.outcomes.size() == 3);

    const std::string fc = forecast_svg(series, series.outcomes[0]);
    CHECK(count(fc, "<polyline") == 4);
    CHECK(count(fc, "class=\"legend-entry\"") == 4);

    const auto& stl = series.outcomes[0].explainer.payload;
    const std::string panels = decomposition_svg("d", stl);
    CHECK(count(panels, "class=\"panel\"") >= 3);
    CHECK(count(panels, "class=\"envelope\"") == count(panels, "class=\"panel\""));

    const auto& pr = series.outcomes[1].explainer.payload;
    int significant = 0;
    for (const auto& r : pr.coefficients) significant += r.significant;
    CHECK(count(coefficient_svg("c", pr), "class=\"bar\"") == significant);

    const std::string forms = form_histogram_svg("f", series.outcomes[2].explainer.payload);
    CHECK(count(forms, "class=\"bar\"") >= 2);

    const fs::path dir = fresh_dir("plots");
    const auto written = emit_plots(series, dir.string());
    CHECK(written.size() >= 6);
    for (const auto& p : written) CHECK(fs::file_size(p) > 0);
    fs::remove_all(dir);
}

TEST_CASE("line chart escapes labels") {
    const std::string svg = line_chart_svg("a < b", {{"x & y", testing::vec({1, 2}), testing::vec({3, 4})}});
    CHECK(svg.find("a &lt; b") != std::string::npos);
    CHECK(svg.find("x &amp; y") != std::string::npos);
}

TEST_CASE("command line exit codes") {
    const fs::path dir = fresh_dir("cli");
    const std::string data = std::string(LOMEF_TEST_DATA_DIR);
    CHECK(run_cli("validate " + data + "/small.csv") == 0);
    CHECK(run_cli("validate " + data + "/does_not_exist.csv") == 2);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("run") == 1);

    {
        std::ofstream bad(dir / "bad.csv");
        bad << "# horizon=1\na,1,1\na,2,oops\n";
    }
    CHECK(run_cli("validate " + (dir / "bad.csv").string()) == 1);

    const std::string gen = (dir / "gen.csv").string();
    CHECK(run_cli("generate " + gen + " --series 4 --length 40 --period 4 --horizon 4 --seed 5") == 0);
    CHECK(run_cli("validate " + gen) == 0);

    const fs::path out = dir / "run";
    CHECK(run_cli("run " + data + "/small.cfg -o " + out.string()) == 0);
    CHECK(fs::exists(out / "records.csv"));
    CHECK(fs::exists(out / "config.txt"));
    CHECK(run_cli("plot " + out.string() + " --series north -o " + (dir / "fig").string()) == 0);
    CHECK(!fs::is_empty(dir / "fig"));
    CHECK(run_cli("plot " + out.string() + " --series nowhere") == 2);
    CHECK(run_cli("stability " + data + "/small.cfg --runs 3 -o " + (dir / "stab").string()) == 0);
    CHECK(fs::exists(dir / "stab" / "stability.csv"));
    fs::remove_all(dir);
}
