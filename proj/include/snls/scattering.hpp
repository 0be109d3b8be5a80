#pragma once

#include <string>
#include <vector>

#include "snls/initial_data.hpp"
#include "snls/solver.hpp"

namespace snls {

// Scattering for i psi_t + 1/2 Delta psi = |psi|^{2 sigma} psi (eps = 1).
struct ScatterConfig {
    int n = 1;
    double sigma = 3.0;
    double T_s = 40.0;        // doubling to 80 keeps the unit Gaussian gap near 5e-5
    double dt = 0.01;
    double tolerance = 1e-4;   // relative L2 gap between horizons T_s and 2 T_s
    bool check_doubling = true;
    double coupling = 1.0;     // 0 turns S into the identity
    double blowup_factor = 10.0;
    double L = 2048.0;         // eps = 1 box
    std::size_t N = 16384;
    std::string cache_dir;     // empty: no cache

    void validate() const;
    std::string describe() const;  // stable text for the cache key
};

struct ScatterResult {
    Field field;          // S applied to the input, on the input grid
    double gap = 0.0;     // horizon doubling gap (0 when unchecked)
    double mass_error = 0.0;
};

// finite-horizon conjugation U0(-T) . NLS(-T -> T) . U0(-T); doubling checked when enabled
ScatterResult scatter_field(const Field& f, const ScatterConfig& cfg);
Profile scatter_forward(const Profile& f, const ScatterConfig& cfg);

enum class FourierConstant { unitary, phased };  // (2 pi)^{-n/2} or (2 i pi)^{-n/2}

// Z = F S F^{-1}; the profile is read as a function of the frequency variable and the
// result is sampled on the dual of the eps = 1 box. Cached when cfg.cache_dir is set.
Profile z_operator(const Profile& f, const ScatterConfig& cfg, FourierConstant c = FourierConstant::unitary);
// horizon gap of the last uncached z_operator call on this thread
double last_scatter_gap();

// SHA-256 hex of the cache key text
std::string config_hash(const std::string& key);

// Estimate of Z f_j from v(t) past the focus: strips the quadratic phase, the dilation
// (1 - t/t_j) and the amplitude |1 - t/t_j|^{-n/2} e^{-i pi n/2}.
Profile extract_post_focus_profile(const Trajectory& tr, const QuadraticDatum& d, double t, const Params& p);
Profile extract_post_focus_profile(const Field& v, const QuadraticDatum& d, double t, const Params& p);

// relative L2 distance of two profiles sampled on g
double profile_distance(const Profile& a, const Profile& b, const GridPtr& g);

struct CausticRow {
    double eps = 0.0;
    std::size_t N = 0;
    double pre_error = 0.0;       // relative H1_eps, against the pre-focus branch with g = f
    double post_error = 0.0;      // relative L2, post-focus branch with g = Z f
    double post_error_control = 0.0;  // same with g = f
    double extract_error = 0.0;   // extracted profile against Z f
};

struct CausticOptions {
    double L = 32.0;
    double pre_time_fraction = 0.5;  // pre-focus comparison at t_j * fraction
    double post_time_factor = 2.0;   // post-focus comparison at t_j * factor
    double coupling = 1.0;
    ScatterConfig scatter;
};

struct CausticReport {
    std::vector<CausticRow> rows;
    double z_gap = 0.0;
    bool post_decreasing = false;
    bool control_non_decreasing = false;
    bool pre_decreasing = false;
};

CausticReport caustic_crossing_report(const QuadraticDatum& d, const Params& p, const std::vector<double>& eps_sweep,
                                      const CausticOptions& opt = {});

// Smallest power-of-two N carrying a quadratic datum at this eps on a box of length L.
std::size_t quadratic_points(const QuadraticDatum& d, double eps, double L, int n = 1);

}  // namespace snls
