#pragma once

#include <vector>

#include "glancing/wavepacket.hpp"

namespace glancing::wavepacket::detail {

// a_k for k in [-N/2, N/2)^n at the FFT bin of k, f = sum_k a_k e^{i eta_k x}.
std::vector<cd> fourier_coefficients(const SpatialField& f);

}  // namespace glancing::wavepacket::detail
