#include "snls/harness/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "json.hpp"
#include "snls/snapshot.hpp"

namespace snls::harness {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> p)
    : Error([&] {
          std::string s = fmt::format("invalid scenario ({} problem{}):", p.size(), p.size() == 1 ? "" : "s");
          for (const auto& x : p) s += "\n  - " + x;
          return s;
      }()),
      problems(std::move(p)) {}

QuadraticDatum DataSpec::quadratic(int dim) const {
    QuadraticDatum d;
    d.profile = Profile::gaussian(dim, profile);
    d.t_j = t_j;
    d.x_j = x_j;
    return d;
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::linearizability: return "linearizability";
        case ExperimentKind::superposition: return "superposition";
        case ExperimentKind::caustic: return "caustic";
        case ExperimentKind::wigner_screen: return "wigner_screen";
        case ExperimentKind::harmonic_lens: return "harmonic_lens";
        case ExperimentKind::scattering: return "scattering";
    }
    return "?";
}

ExperimentKind experiment_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::simulate, ExperimentKind::linearizability, ExperimentKind::superposition,
                   ExperimentKind::caustic, ExperimentKind::wigner_screen, ExperimentKind::harmonic_lens,
                   ExperimentKind::scattering})
        if (to_string(k) == s) return k;
    throw Error("unknown experiment kind '" + s + "'");
}

std::string to_string(DataKind k) {
    switch (k) {
        case DataKind::gaussian: return "gaussian";
        case DataKind::quadratic: return "quadratic";
        case DataKind::harmonic_quadratic: return "harmonic_quadratic";
    }
    return "?";
}

namespace {

DataKind data_from_string(const std::string& s) {
    for (auto k : {DataKind::gaussian, DataKind::quadratic, DataKind::harmonic_quadratic})
        if (to_string(k) == s) return k;
    throw Error("unknown data type '" + s + "'");
}

// Collects problems instead of stopping at the first one.
struct Reader {
    std::vector<std::string> problems;

    template <class T>
    void get(const json& j, const char* key, T& out, const std::string& where) {
        if (!j.contains(key)) return;
        try {
            out = j.at(key).get<T>();
        } catch (const std::exception&) {
            problems.push_back(fmt::format("{}.{}: wrong type", where, key));
        }
    }

    void unknown_keys(const json& j, std::initializer_list<const char*> known, const std::string& where) {
        if (!j.is_object()) {
            problems.push_back(where + ": expected an object");
            return;
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : known) ok = ok || it.key() == k;
            if (!ok) problems.push_back(fmt::format("{}: unknown key '{}'", where, it.key()));
        }
    }

    DataSpec data(const json& j, int dim, const std::string& where) {
        DataSpec d;
        unknown_keys(j, {"type", "amplitude", "width", "center", "momentum", "t_j", "x_j"}, where);
        if (!j.is_object()) return d;
        std::string type = "gaussian";
        get(j, "type", type, where);
        try {
            d.kind = data_from_string(type);
        } catch (const Error& e) {
            problems.push_back(where + ": " + e.what());
        }
        get(j, "width", d.profile.width, where);
        get(j, "center", d.profile.center, where);
        get(j, "momentum", d.profile.momentum, where);
        get(j, "t_j", d.t_j, where);
        get(j, "x_j", d.x_j, where);
        // default amplitude gives unit L2 mass
        d.profile.amplitude = std::pow(std::numbers::pi, -dim / 4.0) * std::pow(d.profile.width, -dim / 2.0);
        if (j.contains("amplitude")) {
            const auto& a = j.at("amplitude");
            if (a.is_number()) d.profile.amplitude = a.get<double>();
            else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number())
                d.profile.amplitude = cplx(a[0].get<double>(), a[1].get<double>());
            else problems.push_back(where + ".amplitude: number or [re, im] expected");
        }
        return d;
    }
};

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

std::vector<std::string> Scenario::problems() const {
    std::vector<std::string> p;
    try {
        params.validate();
    } catch (const Error& e) {
        p.push_back(std::string("params: ") + e.what());
    }
    if (!(L > 0)) p.push_back("grid.L must be positive");
    if (N != 0 && !is_pow2(N)) p.push_back("grid.N must be a power of two (or 0 for automatic)");
    const bool sweep_kind = kind != ExperimentKind::simulate && kind != ExperimentKind::scattering;
    if (eps_sweep.empty()) p.push_back("sweep.eps is empty");
    else if (sweep_kind && eps_sweep.size() < 3) p.push_back("sweep.eps needs at least 3 values for trend tests");
    for (std::size_t i = 0; i < eps_sweep.size(); ++i) {
        if (!(eps_sweep[i] > 0 && eps_sweep[i] <= 1)) p.push_back(fmt::format("sweep.eps[{}] must lie in (0, 1]", i));
        if (i > 0 && !(eps_sweep[i] < eps_sweep[i - 1])) p.push_back("sweep.eps must be strictly decreasing");
    }
    if (data.empty() && kind != ExperimentKind::harmonic_lens) p.push_back("data: at least one item required");
    const bool harmonic = params.potential == Potential::harmonic;
    std::vector<std::pair<double, std::vector<double>>> foci;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& d = data[i];
        const std::string w = fmt::format("data[{}]", i);
        if (!(d.profile.width > 0)) p.push_back(w + ".width must be positive");
        if (!d.profile.center.empty() && static_cast<int>(d.profile.center.size()) != params.n)
            p.push_back(w + ".center has the wrong dimension");
        if (!d.profile.momentum.empty() && static_cast<int>(d.profile.momentum.size()) != params.n)
            p.push_back(w + ".momentum has the wrong dimension");
        if (d.kind != DataKind::gaussian) {
            if (!d.x_j.empty() && static_cast<int>(d.x_j.size()) != params.n) p.push_back(w + ".x_j has the wrong dimension");
            if (!(d.t_j > 0)) p.push_back(w + ".t_j must be positive");
            if (d.kind == DataKind::harmonic_quadratic && !(d.t_j < std::numbers::pi))
                p.push_back(w + ".t_j must lie in (0, pi) for harmonic data");
            if (d.kind == DataKind::harmonic_quadratic && !harmonic)
                p.push_back(w + ": harmonic_quadratic data need potential = harmonic");
            if (d.kind == DataKind::quadratic && harmonic)
                p.push_back(w + ": use harmonic_quadratic data with the harmonic potential");
            auto xj = d.x_j.empty() ? std::vector<double>(params.n, 0.0) : d.x_j;
            for (const auto& f : foci)
                if (f.first == d.t_j && f.second == xj)
                    p.push_back(w + ": duplicate focus (t_j, x_j); superposed data need distinct foci");
            foci.emplace_back(d.t_j, xj);
        }
    }
    if (kind == ExperimentKind::superposition)
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data[i].kind == DataKind::gaussian)
                p.push_back(fmt::format("data[{}]: superposition items must be quadratic; use 'remainder' for "
                                        "Schwartz data",
                                        i));
    if (remainder && remainder->kind != DataKind::gaussian) p.push_back("remainder must be a gaussian profile");
    if (kind == ExperimentKind::caustic) {
        if (data.size() != 1 || data[0].kind != DataKind::quadratic)
            p.push_back("caustic scenarios take exactly one quadratic datum");
    }
    if (kind == ExperimentKind::harmonic_lens && !harmonic) p.push_back("harmonic_lens needs potential = harmonic");
    if (!(params.T > 0)) p.push_back("experiment.T must be positive");
    if (!(snapshot_spacing > 0)) p.push_back("experiment.snapshot_spacing must be positive");
    if (threads < 1) p.push_back("threads must be >= 1");
    if (!(tol.trend >= 0) || tol.violations < 0) p.push_back("tolerances: trend >= 0 and violations >= 0 required");
    try {
        ScatterConfig sc = scatter;
        sc.n = params.n;
        sc.sigma = params.sigma;
        if (kind == ExperimentKind::caustic || kind == ExperimentKind::scattering) sc.validate();
    } catch (const Error& e) {
        p.push_back(std::string("scatter: ") + e.what());
    }
    return p;
}

void Scenario::validate() const {
    auto p = problems();
    if (!p.empty()) throw ConfigError(std::move(p));
}

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError({fmt::format("parse error at line {}, column {}: {}", line, col, e.what())});
    }
    Reader r;
    Scenario s;
    r.unknown_keys(j, {"name", "params", "grid", "data", "remainder", "experiment", "sweep", "tolerances", "scatter",
                       "output", "seed"},
                   "config");
    if (!j.is_object()) throw ConfigError(r.problems);
    r.get(j, "name", s.name, "config");
    r.get(j, "output", s.output_dir, "config");
    r.get(j, "seed", s.seed, "config");

    if (j.contains("params")) {
        const auto& p = j["params"];
        r.unknown_keys(p, {"n", "sigma", "potential"}, "params");
        r.get(p, "n", s.params.n, "params");
        r.get(p, "sigma", s.params.sigma, "params");
        std::string pot = "none";
        r.get(p, "potential", pot, "params");
        try {
            s.params.potential = potential_from_string(pot);
        } catch (const Error& e) {
            r.problems.push_back(std::string("params.potential: ") + e.what());
        }
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        r.unknown_keys(g, {"L", "N"}, "grid");
        r.get(g, "L", s.L, "grid");
        r.get(g, "N", s.N, "grid");
    }
    if (j.contains("experiment")) {
        const auto& e = j["experiment"];
        r.unknown_keys(e, {"kind", "T", "snapshot_spacing", "wigner", "emit_snapshots"}, "experiment");
        std::string kind = "simulate";
        r.get(e, "kind", kind, "experiment");
        try {
            s.kind = experiment_from_string(kind);
        } catch (const Error& ex) {
            r.problems.push_back(std::string("experiment.kind: ") + ex.what());
        }
        r.get(e, "T", s.params.T, "experiment");
        r.get(e, "snapshot_spacing", s.snapshot_spacing, "experiment");
        r.get(e, "wigner", s.wigner, "experiment");
        r.get(e, "emit_snapshots", s.emit_snapshots, "experiment");
    }
    if (j.contains("sweep")) {
        const auto& w = j["sweep"];
        r.unknown_keys(w, {"eps", "threads"}, "sweep");
        r.get(w, "eps", s.eps_sweep, "sweep");
        r.get(w, "threads", s.threads, "sweep");
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        r.unknown_keys(t, {"trend", "violations", "lens", "functional_band"}, "tolerances");
        r.get(t, "trend", s.tol.trend, "tolerances");
        r.get(t, "violations", s.tol.violations, "tolerances");
        r.get(t, "lens", s.tol.lens, "tolerances");
        r.get(t, "functional_band", s.tol.functional_band, "tolerances");
    }
    if (j.contains("scatter")) {
        const auto& c = j["scatter"];
        r.unknown_keys(c, {"T_s", "dt", "tolerance", "check_doubling", "L", "N", "cache_dir"}, "scatter");
        r.get(c, "T_s", s.scatter.T_s, "scatter");
        r.get(c, "dt", s.scatter.dt, "scatter");
        r.get(c, "tolerance", s.scatter.tolerance, "scatter");
        r.get(c, "check_doubling", s.scatter.check_doubling, "scatter");
        r.get(c, "L", s.scatter.L, "scatter");
        r.get(c, "N", s.scatter.N, "scatter");
        r.get(c, "cache_dir", s.scatter.cache_dir, "scatter");
    }
    if (j.contains("data")) {
        if (!j["data"].is_array()) r.problems.push_back("data: expected an array");
        else
            for (std::size_t i = 0; i < j["data"].size(); ++i)
                s.data.push_back(r.data(j["data"][i], s.params.n, fmt::format("data[{}]", i)));
    }
    if (j.contains("remainder") && !j["remainder"].is_null()) s.remainder = r.data(j["remainder"], s.params.n, "remainder");

    auto p = r.problems;
    if (p.empty()) {
        auto more = s.problems();
        p.insert(p.end(), more.begin(), more.end());
    }
    if (!p.empty()) throw ConfigError(std::move(p));
    return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

namespace {
json data_json(const DataSpec& d) {
    json j;
    j["type"] = to_string(d.kind);
    j["amplitude"] = {d.profile.amplitude.real(), d.profile.amplitude.imag()};
    j["width"] = d.profile.width;
    if (!d.profile.center.empty()) j["center"] = d.profile.center;
    if (!d.profile.momentum.empty()) j["momentum"] = d.profile.momentum;
    if (d.kind != DataKind::gaussian) {
        j["t_j"] = d.t_j;
        if (!d.x_j.empty()) j["x_j"] = d.x_j;
    }
    return j;
}
}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["params"] = {{"n", s.params.n}, {"sigma", s.params.sigma}, {"potential", to_string(s.params.potential)}};
    j["grid"] = {{"L", s.L}, {"N", s.N}};
    j["experiment"] = {{"kind", to_string(s.kind)},
                       {"T", s.params.T},
                       {"snapshot_spacing", s.snapshot_spacing},
                       {"wigner", s.wigner},
                       {"emit_snapshots", s.emit_snapshots}};
    j["sweep"] = {{"eps", s.eps_sweep}, {"threads", s.threads}};
    j["tolerances"] = {{"trend", s.tol.trend},
                       {"violations", s.tol.violations},
                       {"lens", s.tol.lens},
                       {"functional_band", s.tol.functional_band}};
    j["scatter"] = {{"T_s", s.scatter.T_s},       {"dt", s.scatter.dt}, {"tolerance", s.scatter.tolerance},
                    {"check_doubling", s.scatter.check_doubling}, {"L", s.scatter.L},   {"N", s.scatter.N},
                    {"cache_dir", s.scatter.cache_dir}};
    j["data"] = json::array();
    for (const auto& d : s.data) j["data"].push_back(data_json(d));
    if (s.remainder) j["remainder"] = data_json(*s.remainder);
    if (!s.output_dir.empty()) j["output"] = s.output_dir;
    j["seed"] = s.seed;
    return j.dump(2) + "\n";
}

}  // namespace snls::harness
