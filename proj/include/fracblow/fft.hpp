#pragma once

#include <functional>
#include <span>

#include "fracblow/grid.hpp"

namespace fracblow {

/// Unnormalized forward DFT in place (FFTW sign convention e^{-i k x}).
void fft_forward(const GridSpec& grid, std::span<Complex> data);
/// Inverse DFT in place, normalized by 1/N^n so that backward(forward(f)) == f.
void fft_backward(const GridSpec& grid, std::span<Complex> data);

/// inverse-DFT(symbol(|xi|) * DFT(f)) for a radial Fourier multiplier.
Field apply_radial_multiplier(const Field& f, const std::function<Complex(double)>& symbol);

/// Fraction of spectral energy sum|f^|^2 carried by modes with |xi| above
/// `band` times the Nyquist wavenumber.
double spectral_tail_fraction(const Field& f, double band = 2.0 / 3.0);

}  // namespace fracblow
