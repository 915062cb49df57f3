#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace qhhg::detail {

namespace {

std::mutex plan_mutex;

fftw_plan plan_for(std::size_t n) {
    static std::map<std::size_t, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> in(n, 0.0);
    std::vector<std::complex<double>> out(n / 2 + 1);
    // FFTW_ESTIMATE keeps planning deterministic; FFTW_UNALIGNED lets the
    // plan run on arbitrary caller buffers via the new-array interface.
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, p);
    return p;
}

}  // namespace

void real_fft(const double* in, std::size_t n, std::complex<double>* out) {
    fftw_plan p = plan_for(n);
    // r2c execution may scribble on its input; keep a scratch copy.
    std::vector<double> scratch(in, in + n);
    fftw_execute_dft_r2c(p, scratch.data(), reinterpret_cast<fftw_complex*>(out));
}

}  // namespace qhhg::detail
