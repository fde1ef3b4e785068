#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ddsm::detail {

// Forward real-to-complex DFT, unnormalized: bins 0..n/2 of
// X_k = sum_j x_j exp(-2 pi i j k / n). Safe to call from several threads.
std::vector<std::complex<double>> real_dft(std::span<const double> samples);

}  // namespace ddsm::detail
