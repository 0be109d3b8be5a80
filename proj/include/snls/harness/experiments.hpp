#pragma once

#include <functional>
#include <string>
#include <vector>

#include "snls/harness/config.hpp"
#include "snls/harness/io.hpp"

namespace snls::harness {

// Smallest admissible grid for every datum of the scenario at this eps (or the fixed N).
GridPtr scenario_grid(const Scenario& s, double eps);
// Sum of all data items plus the remainder.
Field scenario_datum(const Scenario& s, double eps, const GridPtr& g);
Field data_item(const Scenario& s, const DataSpec& d, double eps, const GridPtr& g);
// Focus times inside [0, T]: t_j of quadratic data, pi/2 for non-oscillating harmonic data.
std::vector<double> scenario_foci(const Scenario& s);
// true when no focus lies in [0, T]
bool expected_linearizable(const Scenario& s);

// (q, r) used for Strichartz and decay checks: (8, 4) for n = 1, (4, 4) for n = 2
std::pair<double, double> admissible_pair(int n);

// Runs fn(i) for every sweep index on up to `threads` workers; the first exception is rethrown.
void parallel_indices(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

Bundle simulate_experiment(const Scenario& s);
Bundle linearizability_experiment(const Scenario& s);
Bundle superposition_experiment(const Scenario& s);
Bundle caustic_experiment(const Scenario& s);
Bundle wigner_experiment(const Scenario& s);
Bundle scattering_experiment(const Scenario& s);
// lens cross-checks, Mehler periodicity, pointwise A/B identity, eigenstate rotation,
// refocusing over [0, 2 pi]
Bundle harmonic_suite(const Scenario& s);

// validate, dispatch on s.kind, and write the bundle when s.output_dir is set
Bundle run_scenario(const Scenario& s);

// Default scenarios: schwartz, quadratic, two_focus, harmonic_schwartz, harmonic_quadratic
// (linearizability); superposition, superposition_remainder, harmonic_superposition.
std::vector<Scenario> standard_suite();
Scenario standard_scenario(const std::string& name);

}  // namespace snls::harness
