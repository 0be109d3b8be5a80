#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "snls/field.hpp"
#include "snls/propagators.hpp"

namespace snls {

class DiagnosticSeries {
public:
    const std::vector<double>& times() const { return t_; }
    const std::vector<std::string>& names() const { return names_; }
    bool has(const std::string& name) const { return data_.count(name) != 0; }
    const std::vector<double>& channel(const std::string& name) const;
    std::size_t size() const { return t_.size(); }

    // values in the order of names(); the first push fixes the channel set
    void push(double t, const std::vector<std::pair<std::string, double>>& values);
    void add_channel(const std::string& name, std::vector<double> values);

    std::string csv_header() const;
    std::string csv_row(std::size_t i) const;
    std::string to_csv() const;

private:
    std::vector<double> t_;
    std::vector<std::string> names_;
    std::map<std::string, std::vector<double>> data_;
};

using Channel = std::function<double(const Field&, double)>;

struct SolveConfig {
    double dt = 0.0;          // 0: default_step(eps)
    double dt_factor = 0.01;  // enforced bound dt <= c eps
    bool allow_large_dt = false;
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t record_stride = 0;    // steps between diagnostic rows; 0: spacing <= eps/5
    std::size_t snapshot_stride = 0;  // steps between stored snapshots; 0: endpoints only
    int nonlinearity_sign = +1;       // +1 repulsive, -1 focusing
    double coupling = 1.0;            // multiplies eps^{n sigma}; 0 switches the nonlinearity off
    std::function<double(double)> coupling_t;  // optional time factor (lens-transformed problems)
    std::vector<std::pair<std::string, Channel>> channels;  // extra per-record diagnostics
    double blowup_factor = 10.0;      // guard: max|u| > factor * eps^{-n/2} * max|u0|
    bool mass_monitor = true;
    double mass_window_tol = 1e-8;
    bool store_snapshots = true;
    std::function<void(const Field&, double)> on_snapshot;
    std::string csv_path;             // stream diagnostics here when non-empty

    // Half the bound: the splitting energy error peaks at a focus and scales as dt^2,
    // ~1.5e-6 at the bound itself for focusing data.
    double default_step(double eps) const { return 0.5 * dt_factor * eps; }
};

struct Trajectory {
    Params params;
    std::vector<double> times;   // snapshot times
    std::vector<Field> snapshots;
    DiagnosticSeries diagnostics;
    double dt = 0.0;
};

// One unfused Strang step (phase / kinetic / phase), repulsive, unit coupling.
Field strang_step(const Field& u, double dt, const Params& p);

Trajectory solve(const Field& u0, const Params& p, const SolveConfig& cfg);

// Exact linear flow (free or Mehler according to p.potential) sampled on the same
// record/snapshot schedule that solve() would use with cfg.
Trajectory linear_trajectory(const Field& u0, const Params& p, const SolveConfig& cfg);

// Resolved step size and record/snapshot step indices for a config.
struct Schedule {
    double dt = 0.0;
    std::size_t steps = 0;
    std::vector<std::size_t> records;
    std::vector<std::size_t> snapshots;
    double time(std::size_t s) const;
    double t0 = 0.0;
};
Schedule make_schedule(const Params& p, const SolveConfig& cfg);

// Energies. coupling multiplies the eps^{n sigma}/(sigma+1) term; potential adds 1/2 ||x u||^2.
double nonlinear_energy(const Field& u, const Params& p, double coupling = 1.0);
double linear_energy(const Field& u, const Params& p);

struct ConservationReport {
    std::vector<double> t, mass, energy;
    double mass_drift = 0.0;    // max relative deviation from t0
    double energy_drift = 0.0;
    std::string to_csv() const;
};
ConservationReport conservation_report(const Trajectory& tr);

}  // namespace snls
