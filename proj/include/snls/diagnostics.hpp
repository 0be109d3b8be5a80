#pragma once

#include <string>
#include <vector>

#include "snls/exponents.hpp"
#include "snls/initial_data.hpp"
#include "snls/solver.hpp"

namespace snls {

// ---- trend tests ----
// Strictly decreasing, allowing up to `allowed` increases each no larger than tol (relative),
// with a net drop of more than tol from first to last.
bool trend_decreasing(const std::vector<double>& v, double tol = 0.05, int allowed = 1);
// Non-decreasing with the same allowance for small decreases.
bool trend_non_decreasing(const std::vector<double>& v, double tol = 0.05, int allowed = 1);
bool strictly_decreasing(const std::vector<double>& v);

// ---- linearizability ----

// sup over records of eps^{n sigma} ||v||^{2 sigma+2}_{2 sigma+2}. When foci are given, records
// within 20 eps of each focus time must be spaced <= eps/5.
double linearizability_functional(const Trajectory& v_tr, const Params& p, const std::vector<double>& focus_times = {});
// record spacing check used above
void check_stride_rule(const Trajectory& tr, double eps, const std::vector<double>& focus_times);

struct VerdictRow {
    double eps = 0.0;
    double functional = 0.0;
    double sup_l2 = 0.0;       // sup_t ||u - v||_2
    double sup_grad = 0.0;     // sup_t ||eps grad (u - v)||_2
    double sup_moment = 0.0;   // sup_t ||x (u - v)||_2, harmonic runs only
    double sup_h1 = 0.0;       // sup_t of ||u-v||_2 + ||eps grad(u-v)||_2 (+ moment when harmonic)
};

VerdictRow linearizability_verdict(const Trajectory& u_tr, const Trajectory& v_tr, const Params& p,
                                   const std::vector<double>& focus_times = {});

struct DichotomyTrend {
    bool functional_decreasing = false;
    bool distance_decreasing = false;   // H1_eps channel
    bool l2_non_decreasing = false;
    // both shrink together (linearizable) or neither shrinks
    bool consistent = false;
    std::string summary;
};
DichotomyTrend dichotomy_trend(const std::vector<VerdictRow>& rows);

// ---- norms in time ----

// channel name holding ||u(t)||_{L^r}
std::string lr_channel_name(double r);
Channel lr_channel(double r);

// (int ||u(t)||_{L^r}^q dt)^{1/q} over the record window (trapezoid on record times);
// q = inf gives the sup.
double spacetime_norm(const Trajectory& tr, double q, double r);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t samples = 0;
};
// slope of log||v||_r against log(1/(|t - t_focus| + eps)) over 5 eps <= |t - t_focus| <= t_focus/2
DecayFit decay_fit(const Trajectory& tr, double r, double t_focus, double eps);

// ---- operators ----

// || ((x - x_j)/eps + i (t - t_j) grad) u ||_2
double galilean_norm(const Field& u, double eps, double t, double t_j, const std::vector<double>& x_j = {});

struct ABImages {
    std::vector<Field> A, B;  // one component per axis
};
// A = x sin t - i eps cos t grad,  B = x cos t + i eps sin t grad
ABImages ab_operators(const Field& u, double eps, double t);
// L^1 norm of |Au|^2 + |Bu|^2 - |xu|^2 - |eps grad u|^2, relative to L^1 of the right side
double ab_identity_residual(const Field& u, double eps, double t);

// ---- concentration ----

struct Detection {
    double t = 0.0;
    std::vector<double> x;
    double strength = 0.0;
};
// channels recording the modulus-weighted centroid
std::vector<std::pair<std::string, Channel>> centroid_channels(int dim);
// local maxima in time of eps^{n sigma} ||v||^{2 sigma+2} above tau (default 0.1 * reference)
std::vector<Detection> concentration_detect(const Trajectory& v_tr, const Params& p, double reference,
                                            double tau_fraction = 0.1);

// ---- orthogonality splitting ----

struct SplitReport {
    double lhs = 0.0;  // || sum eps^{-n/2} Phi_j((x - core_j)/eps) ||^{2s+2}_{L^{2s+2}_eps}
    double rhs = 0.0;  // sum ||Phi_j||^{2s+2}_{L^{2s+2}}
    double gap = 0.0;  // |lhs - rhs| / rhs
};
SplitReport orthogonality_split_check(const std::vector<Profile>& profiles, const std::vector<std::vector<double>>& cores,
                                      double eps, double sigma);

// |g(z1+z2) - g(z1) - g(z2)| / (|z1|^{2s}|z2| + |z2|^{2s}|z1|) with g(z) = |z|^{2s} z
double nonlinearity_split_ratio(cplx z1, cplx z2, double sigma);

}  // namespace snls
