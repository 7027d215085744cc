#pragma once

#include "fracinv/fft.hpp"
#include "fracinv/symbol.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace fracinv {

/// Matrix-free d-level symmetric Toeplitz operator B_n generated by the
/// fractional-Laplacian symbol. The operator embeds B_n into a d-level
/// circulant of extent 2*n_i per direction whose eigenvalues (the FFT of the
/// embedded first column) are cached at construction, so one matvec costs a
/// forward and a backward FFT of the embedding.
///
/// The operator is immutable after construction and may be shared across
/// threads; concurrent matvecs must use independent workspaces (the
/// one-argument apply() allocates its own).
class ToeplitzOperator {
public:
    static constexpr std::int64_t kDefaultDenseCap = 4096;

    ToeplitzOperator(SpaceGrid grid, SymbolCoefficients sym);

    const SpaceGrid& grid() const noexcept { return grid_; }
    const SymbolCoefficients& symbol() const noexcept { return sym_; }
    std::int64_t dim() const noexcept { return dim_; }
    const std::vector<std::complex<double>>& spectrum() const noexcept { return spectrum_; }

    struct Workspace {
        std::vector<std::complex<double>> buf;
    };
    Workspace make_workspace() const;

    /// y = B x. Throws DimensionError on size mismatch.
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y, Workspace& ws) const;

    /// Dense realization, entry (i,j) = a_{i-j} in lexicographic multi-index
    /// order. Verification oracle; throws ResourceLimitError above the cap.
    Eigen::MatrixXd dense(std::int64_t cap = kDefaultDenseCap) const;

private:
    SpaceGrid grid_;
    SymbolCoefficients sym_;
    std::int64_t dim_ = 0;
    std::vector<int> embed_;  ///< 2*n_i per direction
    std::int64_t embed_size_ = 0;
    std::vector<std::complex<double>> spectrum_;
    FftPlan plan_;
};

} // namespace fracinv
