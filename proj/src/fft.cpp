#include "atomlight/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace atomlight {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct FftPair::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
    }
};

FftPair::FftPair(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int len = static_cast<int>(n);
    {
        // FFTW_ESTIMATE picks the same algorithm every time; measured plans can
        // differ between runs and break bit-reproducible output.
        std::lock_guard lock(planner_mutex());
        plans_->fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_->inv = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!plans_->fwd || !plans_->inv) throw std::runtime_error("fftw: plan creation failed");
}

FftPair::~FftPair() = default;

FftPair::FftPair(FftPair&&) noexcept = default;
FftPair& FftPair::operator=(FftPair&&) noexcept = default;

void FftPair::forward(std::span<std::complex<double>> data) const {
    if (data.size() != n_) throw std::invalid_argument("fft: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plans_->fwd, buf, buf);
}

void FftPair::inverse(std::span<std::complex<double>> data) const {
    if (data.size() != n_) throw std::invalid_argument("fft: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plans_->inv, buf, buf);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v *= scale;
}

} // namespace atomlight
