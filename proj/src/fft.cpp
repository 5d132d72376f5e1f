#include "gradwave/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace gradwave {

namespace {
// The FFTW planner is global state; plan creation and destruction must be
// serialized (execution is thread-safe).
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in,
                                              const std::vector<int>& shape) {
    std::size_t total = 1;
    for (int n : shape) {
        if (n < 1) throw std::invalid_argument("fft_forward: bad shape");
        total *= static_cast<std::size_t>(n);
    }
    if (total != in.size()) throw std::invalid_argument("fft_forward: shape/size mismatch");

    std::vector<std::complex<double>> out(in.size());
    // FFTW_ESTIMATE keeps planning deterministic and leaves the input intact.
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(
            static_cast<int>(shape.size()), shape.data(),
            reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fft_forward: planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace gradwave
