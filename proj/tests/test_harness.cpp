#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "snls/harness/experiments.hpp"

using namespace snls;
using namespace snls::harness;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "name": "small",
  "params": {"n": 1, "sigma": 3},
  "grid": {"L": 32},
  "experiment": {"kind": "simulate", "T": 0.5},
  "sweep": {"eps": [0.08, 0.04, 0.02]},
  "data": [{"type": "gaussian", "width": 1.0}]
})";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    return d;
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.problems;
    }
    return {};
}

}  // namespace

TEST_CASE("config parsing") {
    const Scenario s = parse_scenario(kSmall);
    CHECK(s.name == "small");
    CHECK(s.kind == ExperimentKind::simulate);
    CHECK(s.eps_sweep.size() == 3);
    CHECK(s.params.T == 0.5);
    REQUIRE(s.data.size() == 1);
    CHECK(s.data[0].kind == DataKind::gaussian);

    SUBCASE("syntax errors carry a position") {
        const auto p = problems_of("{\n  \"name\": \"x\",\n  \"params\": {\"n\": 1,,}\n}");
        REQUIRE(p.size() == 1);
        CHECK(p[0].find("line 3") != std::string::npos);
    }
    SUBCASE("every problem is reported at once") {
        const auto p = problems_of(R"({"nme": "x", "params": {"n": 1, "sigmaa": 1}, "sweep": {"eps": []}})");
        REQUIRE(p.size() == 2);
        CHECK(p[0].find("unknown key 'nme'") != std::string::npos);
        CHECK(p[1].find("params") != std::string::npos);
        // semantic problems are collected together once the structure is clean
        const auto q = problems_of(R"({"params": {"n": 3, "sigma": -1}, "sweep": {"eps": []}})");
        CHECK(q.size() >= 3);
    }
    SUBCASE("empty and unordered sweeps") {
        CHECK_FALSE(problems_of(R"({"sweep": {"eps": []}, "data": [{"type": "gaussian"}]})").empty());
        CHECK_FALSE(problems_of(R"({"sweep": {"eps": [0.01, 0.02]}, "data": [{"type": "gaussian"}]})").empty());
    }
    SUBCASE("JSON roundtrip") {
        const Scenario back = parse_scenario(scenario_to_json(s));
        CHECK(scenario_to_json(back) == scenario_to_json(s));
        for (const auto& std_s : standard_suite()) CHECK(scenario_to_json(parse_scenario(scenario_to_json(std_s))) ==
                                                         scenario_to_json(std_s));
    }
}

TEST_CASE("scenario helpers") {
    CHECK(admissible_pair(1) == std::pair<double, double>{8.0, 4.0});
    CHECK(admissible_pair(2) == std::pair<double, double>{4.0, 4.0});
    const Scenario q = standard_scenario("quadratic");
    CHECK(scenario_foci(q) == std::vector<double>{1.0});
    CHECK_FALSE(expected_linearizable(q));
    CHECK(expected_linearizable(standard_scenario("schwartz")));
    CHECK_THROWS(standard_scenario("nope"));

    std::vector<int> hit(7, 0);
    parallel_indices(7, 3, [&](std::size_t i) { hit[i] += 1; });
    CHECK(hit == std::vector<int>(7, 1));
    CHECK_THROWS(parallel_indices(4, 2, [](std::size_t i) {
        if (i == 2) throw Error("boom");
    }));
}

TEST_CASE("single-piece superposition has no defect") {
    Scenario s = standard_scenario("superposition");
    s.data.resize(1);
    s.eps_sweep = {0.08, 0.04, 0.02};
    s.params.T = 1.5;
    const Bundle b = superposition_experiment(s);
    CHECK(b.pass());
    for (const auto& row : b.report["rows"]) CHECK(row["defect_l2"].get<double>() <= 1e-12);
}

TEST_CASE("bundles on disk") {
    SUBCASE("empty bundle writes nothing") {
        const auto d = fresh_dir("snls_empty_bundle");
        CHECK(emit_plots_data(Bundle{}, d.string()).empty());
        CHECK_FALSE(fs::exists(d));
    }
    SUBCASE("plot and heatmap text") {
        PlotFile p{"trend", {"eps", "value"}, {{0.1, 2.0}, {0.05, 1.0}}};
        const std::string t = plot_text(p);
        CHECK(t.rfind("# eps value", 0) == 0);
        CHECK(t.find("0.05 1") != std::string::npos);

        Scenario s = standard_scenario("quadratic");
        s.kind = ExperimentKind::wigner_screen;
        s.eps_sweep = {0.04};
        const Bundle b = wigner_experiment(s);
        REQUIRE_FALSE(b.heatmaps.empty());
        const std::string h = heatmap_text(b.heatmaps.front().second);
        std::istringstream in(h);
        double ncols = 0;
        in >> ncols;
        CHECK(ncols > 10);
        CHECK(ncols <= 400);
    }
    SUBCASE("Schwartz scenario end to end") {
        const auto d = fresh_dir("snls_schwartz_bundle");
        // the full sweep: the screen needs eps = 0.01 to see the tube mass leave
        Scenario s = standard_scenario("schwartz");
        s.output_dir = d.string();
        const Bundle b = run_scenario(s);
        CHECK(b.pass());
        REQUIRE(fs::exists(d / "report.json"));
        const auto j = nlohmann::json::parse(slurp(d / "report.json"));
        CHECK(j["schema_version"] == kReportSchemaVersion);
        CHECK(j["pass"] == true);
        CHECK(j["name"] == "schwartz");
        CHECK(j["report"]["scenario"]["name"] == "schwartz");
        CHECK(j["report"]["rows"].size() == s.eps_sweep.size());
        CHECK(fs::exists(d / "plots" / "trend_functional.dat"));
        CHECK(fs::exists(d / "eps_0.02"));
        for (const auto& c : j["checks"]) {
            CHECK(c.contains("reference"));
            CHECK(c["pass"] == true);
        }
        fs::remove_all(d);
    }
}
