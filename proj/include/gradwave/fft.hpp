#pragma once

#include <complex>
#include <vector>

namespace gradwave {

// Forward complex DFT (negative exponent), row-major with the last axis
// fastest, arbitrary sizes. Deterministic for fixed input.
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in,
                                              const std::vector<int>& shape);

}  // namespace gradwave
