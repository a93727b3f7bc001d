#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace atomlight {

// Unnormalized complex FFT pair of fixed length backed by FFTW.
// Plans are built once (under a process-wide lock, FFTW's planner is not
// reentrant) and then executed on arbitrary buffers of the planned size.
class FftPair {
public:
    explicit FftPair(std::size_t n);
    ~FftPair();
    FftPair(FftPair&&) noexcept;
    FftPair& operator=(FftPair&&) noexcept;
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    std::size_t size() const noexcept { return n_; }

    void forward(std::span<std::complex<double>> data) const;
    // Includes the 1/n normalization.
    void inverse(std::span<std::complex<double>> data) const;

private:
    struct Plans;
    std::size_t n_ = 0;
    std::unique_ptr<Plans> plans_;
};

} // namespace atomlight
