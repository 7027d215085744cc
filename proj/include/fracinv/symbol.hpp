#pragma once

#include <cstdint>
#include <vector>

namespace fracinv {

/// Tensor-product spatial mesh with a common interior step h in every
/// direction. Interior nodes along direction i are
///   x_j = box_lo[i] + j*h,  j = 1..n[i],
/// so h = (box_hi[i] - box_lo[i]) / (n[i] + 1) and the exterior nodes
/// j = 0, n[i]+1 carry the homogeneous Dirichlet values.
struct SpaceGrid {
    int d = 1;
    std::vector<int> n;       ///< interior points per direction
    std::vector<double> box_lo;
    std::vector<double> box_hi;
    double h = 0.0;

    SpaceGrid(std::vector<int> n_, std::vector<double> lo, std::vector<double> hi);

    /// Total number of interior nodes N(n) = prod n_i.
    std::int64_t total() const;

    /// Coordinate of interior node j (1-based) along direction i.
    double node(int dir, int j) const { return box_lo[static_cast<std::size_t>(dir)] + j * h; }

    /// Interior nodes enumerated in lexicographic multi-index order,
    /// flattened to total() x d coordinates.
    std::vector<std::vector<double>> nodes() const;
};

/// Fourier coefficients a_l of the generating symbol
/// g(theta) = (sum_i 4 sin^2(theta_i/2))^{omega/2}, stored as a full d-level
/// tensor over l_i = -(n_i-1)..(n_i-1). The symbol is real and even, so the
/// tensor is symmetric under l -> -l.
struct SymbolCoefficients {
    double omega = 0.0;
    int d = 1;
    std::vector<int> n;           ///< per-direction extent (coefficients span 2*n_i-1)
    std::vector<double> coeffs;   ///< lexicographic over index l_i + n_i - 1

    /// Coefficient at multi-index l (components may be negative).
    double at(const std::vector<int>& l) const;
    /// 1D convenience accessor.
    double at(int l) const { return at(std::vector<int>{l}); }

    std::int64_t tensor_size() const;
};

/// 1D coefficients from the closed form a_0 = Gamma(omega+1)/Gamma(omega/2+1)^2
/// seeded into the exact ratio recursion
///   a_{l+1} = (1 - (omega+1)/(omega/2+l+1)) * a_l.
/// Valid for omega in (0,2]; omega = 2 reproduces the [-1,2,-1] stencil.
SymbolCoefficients symbol_coeffs_1d(double omega, int n);

/// d-dimensional coefficients by sampling g on a uniform tensor grid and
/// taking a multidimensional DFT. Sampling resolution per direction is
/// max(4*n_i, 1024) for d >= 2 and max(4*n, 131072) for d = 1, where the
/// aliasing error of the rectangle rule is held below 1e-10 so the result
/// can be cross-checked against the closed form. Throws ResourceLimitError
/// when the sample tensor would exceed sample_cap entries.
SymbolCoefficients symbol_coeffs_md(double omega, const std::vector<int>& n,
                                    std::int64_t sample_cap = std::int64_t(1) << 26);

} // namespace fracinv
