#pragma once

#include <limits>

#include "snls/field.hpp"

namespace snls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (sum |f|^r dx^n)^{1/r}; r = kInf gives max modulus.
double norm_lr(const Field& f, double r);
double norm_l2(const Field& f);
double mass(const Field& f);  // ||f||_2^2

// ||f||_2 + ||eps grad f||_2
double norm_h1_eps(const Field& f, double eps);
// ||eps grad f||_2
double grad_norm_eps(const Field& f, double eps);
// eps^{n sigma/(2 sigma+2)} ||f||_{2 sigma + 2}
double norm_l2sigma_eps(const Field& f, double eps, double sigma, int n);
// || |x - c| f ||_2
double moment_norm(const Field& f, const std::vector<double>& center = {});

cplx inner(const Field& f, const Field& g);  // sum conj(f) g dx^n

// modulus-weighted centroid sum x |f|^2 / sum |f|^2
std::vector<double> centroid(const Field& f);

// Fraction of mass inside the central box of relative size `window` (0.5 = half-window).
double mass_in_window(const Field& f, double window = 0.5);

// Effective support radius: largest |x| (per axis max) where |f| > rel * max|f|.
double support_radius(const Field& f, double rel = 1e-12);

}  // namespace snls
