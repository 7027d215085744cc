#include "fracinv/fft.hpp"

#include "fracinv/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fracinv {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

struct FftPlan::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

FftPlan::FftPlan(std::vector<int> extents)
    : impl_(std::make_unique<Impl>()), extents_(std::move(extents)) {
    if (extents_.empty())
        throw std::domain_error("FftPlan requires at least one extent");
    size_ = 1;
    for (int e : extents_) {
        if (e < 1)
            throw std::domain_error("FftPlan extents must be positive");
        size_ *= e;
    }
    // FFTW_UNALIGNED lets the plan execute on any buffer of the right shape
    std::vector<std::complex<double>> proto(static_cast<std::size_t>(size_));
    auto* buf = reinterpret_cast<fftw_complex*>(proto.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->fwd = fftw_plan_dft(static_cast<int>(extents_.size()), extents_.data(), buf, buf,
                               FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl_->bwd = fftw_plan_dft(static_cast<int>(extents_.size()), extents_.data(), buf, buf,
                               FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!impl_->fwd || !impl_->bwd)
        throw std::runtime_error("FFTW plan creation failed");
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::forward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(impl_->fwd, buf, buf);
}

void FftPlan::backward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(impl_->bwd, buf, buf);
}

void fft_nd(std::vector<std::complex<double>>& data, const std::vector<int>& extents, bool inverse) {
    FftPlan plan(extents);
    if (data.size() != static_cast<std::size_t>(plan.size()))
        throw DimensionError("fft_nd: data size does not match extents");
    if (inverse)
        plan.backward(data.data());
    else
        plan.forward(data.data());
}

} // namespace fracinv
