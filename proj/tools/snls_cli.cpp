// snls-cli: run a scenario (JSON config or a built-in one) and write its report bundle.
#include <fmt/format.h>

#include <iostream>

#include "CLI11.hpp"
#include "snls/harness/experiments.hpp"

using namespace snls;
using namespace snls::harness;

namespace {

struct Common {
    std::string config, out, scenario;
    std::vector<double> eps;
    int threads = 0;
    bool emit_snapshots = false;
    bool dump = false;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_scenario) {
    c.scenario = default_scenario;
    sub->add_option("-c,--config", c.config, "scenario JSON file")->check(CLI::ExistingFile);
    sub->add_option("-s,--scenario", c.scenario, "built-in scenario when no config is given")
        ->capture_default_str();
    sub->add_option("-o,--out", c.out, "output directory");
    sub->add_option("--eps", c.eps, "override the eps sweep");
    sub->add_option("-j,--threads", c.threads, "worker threads for the sweep");
    sub->add_flag("--emit-snapshots", c.emit_snapshots, "write binary snapshots");
    sub->add_flag("--dump-config", c.dump, "print the resolved scenario as JSON and exit");
}

int run(const Common& c, ExperimentKind kind) {
    Scenario s = c.config.empty() ? standard_scenario(c.scenario) : load_scenario(c.config);
    // simulate and wigner only need data, so any built-in scenario can be relabelled
    if (c.config.empty() && (kind == ExperimentKind::simulate || kind == ExperimentKind::wigner_screen)) s.kind = kind;
    if (s.kind != kind)
        throw ConfigError({fmt::format("scenario '{}' is of kind {}, not {}", s.name, to_string(s.kind), to_string(kind))});
    if (!c.eps.empty()) s.eps_sweep = c.eps;
    if (c.threads > 0) s.threads = c.threads;
    if (c.emit_snapshots) s.emit_snapshots = true;
    if (!c.out.empty()) s.output_dir = c.out;
    if (c.dump) {
        fmt::print("{}\n", scenario_to_json(s));
        return 0;
    }

    const Bundle b = run_scenario(s);
    for (const auto& ch : b.checks)
        fmt::print("{} {:<44} {}\n", ch.pass ? "PASS" : "FAIL", ch.name, ch.detail);
    if (!s.output_dir.empty()) fmt::print("wrote {}\n", s.output_dir);
    return b.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical NLS toolkit"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        ExperimentKind kind;
        const char* scenario;
    };
    const Sub subs[] = {
        {"simulate", "run the nonlinear solver and record conservation diagnostics", ExperimentKind::simulate,
         "schwartz"},
        {"linearizability", "compare nonlinear and linear flows across an eps sweep", ExperimentKind::linearizability,
         "quadratic"},
        {"superposition", "superposition defect of several focusing data", ExperimentKind::superposition,
         "superposition"},
        {"caustic", "caustic crossing through the scattering operator", ExperimentKind::caustic, "caustic"},
        {"wigner", "Wigner singularity screen of the initial datum", ExperimentKind::wigner_screen, "quadratic"},
        {"scattering", "scattering operator Z on profiles", ExperimentKind::scattering, "scattering"},
        {"harmonic", "harmonic-trap lens and propagator checks", ExperimentKind::harmonic_lens, "harmonic_lens"},
    };
    std::vector<Common> opts(std::size(subs));
    std::vector<CLI::App*> apps;
    for (std::size_t i = 0; i < std::size(subs); ++i) {
        apps.push_back(app.add_subcommand(subs[i].name, subs[i].help));
        add_common(apps.back(), opts[i], subs[i].scenario);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors share the config-error code; --help stays 0
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < std::size(subs); ++i) {
            if (!apps[i]->parsed()) continue;
            return run(opts[i], subs[i].kind);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems) std::cerr << "  " << p << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
