#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "snls/wigner.hpp"

namespace snls::harness {

inline constexpr int kReportSchemaVersion = 1;

// whitespace-separated columns for gnuplot
struct PlotFile {
    std::string name;  // file stem, written as <name>.dat
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Check {
    std::string name;
    std::string reference;  // which statement the assertion operationalizes
    bool pass = false;
    std::string detail;
};

struct Bundle {
    std::string name;
    std::string kind;
    nlohmann::json report = nlohmann::json::object();
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> files;  // relative path, contents (CSV or binary)
    std::vector<PlotFile> plots;
    std::vector<std::pair<std::string, WignerTable>> heatmaps;

    bool pass() const;
    bool empty() const { return report.empty() && checks.empty() && files.empty() && plots.empty() && heatmaps.empty(); }
    void check(std::string name, std::string reference, bool pass, std::string detail = {});
};

nlohmann::json bundle_json(const Bundle& b);

// report.json, data files, plot data; every file written atomically
void write_bundle(const Bundle& b, const std::string& dir);
// only the plot data; an empty bundle writes nothing
std::vector<std::string> emit_plots_data(const Bundle& b, const std::string& dir);

std::string plot_text(const PlotFile& p);
// gnuplot "matrix nonuniform": first row <cols> xi..., then x W...; columns trimmed to
// the support and decimated to at most max_cols
std::string heatmap_text(const WignerTable& w, std::size_t max_cols = 400);

}  // namespace snls::harness
