#include "fraclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace fraclab::detail {

namespace {

struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans;

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex);
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        // In-place plan; FFTW_UNALIGNED so the new-array execute accepts
        // whatever std::vector hands us.
        fftw_complex* buf = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(int(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans) fftw_destroy_plan(p);
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void dft(std::complex<double>* data, std::size_t n, int sign) {
    if (n <= 1) return;
    fftw_plan p = cache().get(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace fraclab::detail
