#pragma once

// Thin FFTW wrappers.  Plans use FFTW_ESTIMATE so the chosen algorithm, and
// with it every output bit, does not depend on timing measurements.

#include <complex>
#include <vector>

namespace glancing::fft {

using cd = std::complex<double>;

// In-place unnormalized DFT of `rows` contiguous rows of length n.
// sign = -1 forward, +1 backward.
void rows(std::vector<cd>& a, int nrows, int n, int sign);

// In-place unnormalized 2D DFT of an n0 x n1 row-major array.
void two_d(std::vector<cd>& a, int n0, int n1, int sign);

// In-place unnormalized 1D DFT.
inline void one_d(std::vector<cd>& a, int sign) { rows(a, 1, static_cast<int>(a.size()), sign); }

}  // namespace glancing::fft
