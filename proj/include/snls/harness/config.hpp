#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snls/grid.hpp"
#include "snls/initial_data.hpp"
#include "snls/scattering.hpp"

namespace snls::harness {

struct ConfigError : Error {
    std::vector<std::string> problems;
    explicit ConfigError(std::vector<std::string> p);
};

enum class DataKind { gaussian, quadratic, harmonic_quadratic };

struct DataSpec {
    DataKind kind = DataKind::gaussian;
    GaussianDesc profile;
    double t_j = 1.0;
    std::vector<double> x_j;

    QuadraticDatum quadratic(int dim) const;
};

struct Tolerances {
    double trend = 0.05;      // size of a tolerated trend violation
    int violations = 1;       // how many are tolerated
    double lens = 1e-8;
    double functional_band = 0.2;  // quadratic functional vs its limit
};

enum class ExperimentKind { simulate, linearizability, superposition, caustic, wigner_screen, harmonic_lens, scattering };

struct Scenario {
    std::string name = "scenario";
    ExperimentKind kind = ExperimentKind::simulate;
    Params params;
    double L = 32.0;
    std::size_t N = 0;  // 0: smallest admissible per eps
    std::vector<double> eps_sweep;
    std::vector<DataSpec> data;
    std::optional<DataSpec> remainder;
    double snapshot_spacing = 0.05;  // time between stored snapshots for sup-in-time channels
    bool wigner = true;              // attach the singularity screen to linearizability runs
    Tolerances tol;
    ScatterConfig scatter;
    std::string output_dir;
    std::uint64_t seed = 1;
    int threads = 1;
    bool emit_snapshots = false;

    // all problems at once; empty when valid
    std::vector<std::string> problems() const;
    void validate() const;  // throws ConfigError
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);
std::string to_string(DataKind k);

// Parse JSON text; syntax errors carry line and column.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

}  // namespace snls::harness
