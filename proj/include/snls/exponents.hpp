#pragma once

#include <string>

namespace snls {

// n (1/2 - 1/r); r may be +infinity
double delta_exponent(double r, int n);

// 2/q = delta(r), 2 <= r <= inf for n = 1, 2 <= r < inf for n = 2
bool admissible_check(double q, double r, int n);

struct ExponentSet {
    int n = 1;
    double sigma = 0.0;
    double q = 0.0, r = 0.0, s = 0.0, k = 0.0;
    double theta1 = 0.0, theta2 = 0.0, gamma = 0.0;

    double delta(double rr) const { return delta_exponent(rr, n); }
    // re-checks every relation; throws with the failing one
    void verify() const;
};

// One canonical tuple: the smallest r on a uniform search grid (step 0.01 from 2.01)
// for which the Hoelder relations give a feasible (s, k).
ExponentSet exponent_set(int n, double sigma);

double theta2_formula(int n, double sigma);

}  // namespace snls
