#pragma once

#include "snls/field.hpp"
#include "snls/initial_data.hpp"

namespace snls {

enum class PropagatorKind { free, mehler };

struct PropagatorSpec {
    PropagatorKind kind = PropagatorKind::free;
    double eps = 1.0;
    double t = 0.0;
};

Field apply(const PropagatorSpec& p, const Field& f);

// e^{i eps t Delta / 2}: multiplier exp(-i eps t |xi|^2 / 2)
Field free_propagate(const Field& f, double eps, double t);

// Harmonic flow of i eps u_t + eps^2/2 Delta u = |x|^2/2 u.
// U(t) = Q^k M(t'), t' = t - k pi/2 in [pi/4, 3pi/4], Q the quarter-period transform,
// M the chirp / scaled transform / chirp form of the kernel.
Field mehler_propagate(const Field& f, double eps, double t);

// Throws when the data's phase-space extent does not fit the grid for the harmonic flow.
void check_mehler_resolution(const Field& f, double eps);

// True when L^2 = 2 pi eps N on every axis, i.e. the quarter period is a plain DFT.
bool mehler_compatible(const Grid& g, double eps);
// Box length making N points compatible at this eps.
double mehler_compatible_extent(std::size_t N, double eps);

// e^{i x^2/(2t)} t^{-n/2} V0hat(x/t), transform with the (2 i pi)^{-n/2} constant,
// and t^{-n/2} = i^n |t|^{-n/2} for t < 0.
Field dispersive_profile(const Field& V0, double t);

enum class FocusSide { pre, post };

// Pre-focus: (1 - t/t_j)^{-n/2} g((x - x_j)/(1 - t/t_j)) e^{i |x - x_j|^2 / (2 eps (t - t_j))}.
// Post-focus: same with amplitude (t/t_j - 1)^{-n/2} e^{-i pi n/2}.
// floor < 0 means use eps.
Field caustic_approximant(const QuadraticDatum& d, double eps, double t, FocusSide side, const Profile& g,
                          const GridPtr& grid, double floor = -1.0);

}  // namespace snls
