#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace fracinv {

/// Reusable forward/backward DFT plan pair for one tensor shape (row-major,
/// last extent fastest). Plans are created once under a process-wide planner
/// lock; execution is lock-free and may run concurrently on distinct buffers.
/// The backward transform is unscaled, FFTW convention.
class FftPlan {
public:
    explicit FftPlan(std::vector<int> extents);
    ~FftPlan();

    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void forward(std::complex<double>* data) const;
    void backward(std::complex<double>* data) const;

    std::int64_t size() const noexcept { return size_; }
    const std::vector<int>& extents() const noexcept { return extents_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<int> extents_;
    std::int64_t size_ = 0;
};

/// One-shot in-place n-dimensional DFT of a row-major complex tensor.
void fft_nd(std::vector<std::complex<double>>& data, const std::vector<int>& extents, bool inverse);

} // namespace fracinv
