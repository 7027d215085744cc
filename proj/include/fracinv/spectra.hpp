#pragma once

#include "fracinv/system.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace fracinv {

enum class DenseKind {
    SystemA,          ///< full block system matrix
    PreconditionerP,  ///< lower block-triangular preconditioner
    ForwardAhat,      ///< time-stepping matrix of the direct problem
};

struct DenseSystem {
    Eigen::MatrixXd matrix;
    DenseKind kind;
};

struct SpectralSummary {
    std::vector<std::complex<double>> eigenvalues;
    double cond_2 = 0.0;
    int cluster_count = 0;  ///< eigenvalues with |lambda - 1| <= cluster_tol
    int outlier_count = 0;
};

/// Entrywise realization of the block matrices for verification and spectral
/// analysis. Throws ResourceLimitError when the total dimension exceeds cap
/// ((S+1)N for A and P, SN for the forward matrix).
DenseSystem assemble_dense_system(const SystemOperator& A, DenseKind kind, std::int64_t cap = 4096);

/// All eigenvalues of a dense real matrix. Throws EigensolverError on
/// non-convergence of the QR iteration.
std::vector<std::complex<double>> eigenvalues_dense(const Eigen::MatrixXd& M);

/// Eigenvalues of P^{-1} A, with the product formed explicitly by back-solving
/// P against the columns of A.
std::vector<std::complex<double>> eigenvalues_preconditioned(const Eigen::MatrixXd& P,
                                                             const Eigen::MatrixXd& A);

/// 2-norm condition number sigma_max / sigma_min via dense SVD; infinity for
/// an exactly singular matrix.
double condition_number_2(const Eigen::MatrixXd& M);

/// Condition number of the explicitly formed P^{-1} A.
double condition_number_preconditioned(const Eigen::MatrixXd& P, const Eigen::MatrixXd& A);

/// Eigenvalues, condition number and cluster statistics in one pass.
SpectralSummary spectral_summary(const Eigen::MatrixXd& M, double cluster_tol = 1e-6);

} // namespace fracinv
