#include "snls/harness/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "snls/snapshot.hpp"

namespace snls::harness {

namespace fs = std::filesystem;

bool Bundle::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Bundle::check(std::string n, std::string ref, bool ok, std::string detail) {
    checks.push_back({std::move(n), std::move(ref), ok, std::move(detail)});
}

nlohmann::json bundle_json(const Bundle& b) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["name"] = b.name;
    j["kind"] = b.kind;
    j["pass"] = b.pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : b.checks)
        j["checks"].push_back({{"name", c.name}, {"reference", c.reference}, {"pass", c.pass}, {"detail", c.detail}});
    j["report"] = b.report;
    return j;
}

std::string plot_text(const PlotFile& p) {
    std::string s = "#";
    for (const auto& c : p.columns) s += " " + c;
    s += "\n";
    for (const auto& r : p.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? " " : "") + fmt::format("{}", r[i]);
        s += "\n";
    }
    return s;
}

std::string heatmap_text(const WignerTable& w, std::size_t max_cols) {
    // columns carrying mass
    std::size_t lo = w.cols(), hi = 0;
    double wmax = 0.0;
    for (double v : w.w) wmax = std::max(wmax, std::abs(v));
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
            if (std::abs(w.at(i, j)) > 1e-6 * wmax) {
                lo = std::min(lo, j);
                hi = std::max(hi, j);
            }
    if (lo > hi) {
        lo = 0;
        hi = w.cols() - 1;
    }
    const std::size_t span = hi - lo + 1;
    const std::size_t step = std::max<std::size_t>(1, (span + max_cols - 1) / max_cols);
    std::vector<std::size_t> cols;
    for (std::size_t j = lo; j <= hi; j += step) cols.push_back(j);
    std::string s = fmt::format("{}", cols.size());
    for (auto j : cols) s += fmt::format(" {}", w.xi[j]);
    s += "\n";
    for (std::size_t i = 0; i < w.rows(); ++i) {
        s += fmt::format("{}", w.x[i]);
        for (auto j : cols) s += fmt::format(" {}", w.at(i, j));
        s += "\n";
    }
    return s;
}

std::vector<std::string> emit_plots_data(const Bundle& b, const std::string& dir) {
    std::vector<std::string> written;
    if (b.plots.empty() && b.heatmaps.empty()) return written;
    fs::create_directories(dir);
    for (const auto& p : b.plots) {
        const auto path = (fs::path(dir) / (p.name + ".dat")).string();
        atomic_write_file(path, plot_text(p));
        written.push_back(path);
    }
    for (const auto& [name, w] : b.heatmaps) {
        const auto path = (fs::path(dir) / (name + ".dat")).string();
        atomic_write_file(path, heatmap_text(w));
        written.push_back(path);
    }
    return written;
}

void write_bundle(const Bundle& b, const std::string& dir) {
    fs::create_directories(dir);
    for (const auto& [rel, bytes] : b.files) {
        const auto path = fs::path(dir) / rel;
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        atomic_write_file(path.string(), bytes);
    }
    emit_plots_data(b, (fs::path(dir) / "plots").string());
    atomic_write_file((fs::path(dir) / "report.json").string(), bundle_json(b).dump(2) + "\n");
}

}  // namespace snls::harness
