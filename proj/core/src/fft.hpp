#pragma once

#include <complex>
#include <cstddef>

namespace qhhg::detail {

/// Out-of-place real-to-complex DFT (FFTW backend, plan cache per length).
/// out must hold n/2 + 1 bins. Thread-safe; results are independent of the
/// caller's threading.
void real_fft(const double* in, std::size_t n, std::complex<double>* out);

}  // namespace qhhg::detail
