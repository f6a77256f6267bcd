#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fraclab::detail {

// In-place complex DFT, unnormalized; sign = -1 forward, +1 inverse.
// Thread-safe (FFTW plans are cached per size under a mutex and executed
// with the new-array interface).
void dft(std::complex<double>* data, std::size_t n, int sign);

inline void dft(std::vector<std::complex<double>>& data, int sign) {
    dft(data.data(), data.size(), sign);
}

std::size_t next_pow2(std::size_t n);

}  // namespace fraclab::detail
