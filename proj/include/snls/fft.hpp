#pragma once

#include <vector>

#include "snls/field.hpp"

namespace snls {

// In-place unnormalised DFT over a row-major array with the given shape.
// sign = -1 forward, +1 backward. Plans are cached and shared between threads.
void fft_inplace(cplx* data, const std::vector<std::size_t>& shape, int sign);

// Continuum-normalised transform on the centered grid:
//   fhat(xi) = (2 pi)^{-n/2} sum_x e^{-i x.xi} f(x) dx^n
// so e^{-x^2/2} -> e^{-xi^2/2}. Result lives on grid.dual() in centered order.
Field to_spectral(const Field& f);
Field to_physical(const Field& fhat);

// Same pair with the constant (2 i pi)^{-n/2} in place of (2 pi)^{-n/2}.
Field to_spectral_alt(const Field& f);
Field to_physical_alt(const Field& fhat);

// out[k] = sum_m in[m] exp(-i alpha_a k'_a m'_a) over centered indices, axis by axis.
// Uses a plain FFT when alpha_a = +-2pi/N_a, chirp-z (Bluestein) otherwise.
cvec scaled_dft(const cvec& in, const Grid& g, const std::vector<double>& alpha);

// Spectral derivative along one axis.
Field gradient(const Field& f, int axis);

// Band-limited resample: g(x) = f(lambda * (x - shift)), zero where the
// argument leaves the box (periodic images are not wanted).
Field resample_scaled(const Field& f, double lambda, const std::vector<double>& shift);

}  // namespace snls
