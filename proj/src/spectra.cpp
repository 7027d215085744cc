#include "fracinv/spectra.hpp"

#include "fracinv/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <limits>
#include <stdexcept>
#include <string>

namespace fracinv {

DenseSystem assemble_dense_system(const SystemOperator& A, DenseKind kind, std::int64_t cap) {
    const std::int64_t N = A.space_dim();
    const int S = A.steps();
    const std::int64_t dim = kind == DenseKind::ForwardAhat ? S * N : (S + 1) * N;
    if (dim > cap)
        throw ResourceLimitError("assemble_dense_system: dimension " + std::to_string(dim) +
                                 " exceeds cap " + std::to_string(cap));

    const Eigen::MatrixXd Bd = A.laplacian().dense(cap);
    const auto& e = A.weights().e;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);

    for (int s = 1; s <= S; ++s) {
        const auto d1 = A.diagonals().D1.row(s - 1).transpose();
        const auto d2 = A.diagonals().D2.row(s - 1).transpose();
        const std::int64_t r = (s - 1) * N;
        M.block(r, r, N, N) = A.scale_space() * d2.asDiagonal() * Bd;
        M.block(r, r, N, N).diagonal() += e[0] * d1;
        for (int m = 1; m < s; ++m)
            M.block(r, (m - 1) * N, N, N).diagonal() = e[static_cast<std::size_t>(s - m)] * d1;
        if (kind == DenseKind::SystemA)
            M.block(r, static_cast<std::int64_t>(S) * N, N, N).diagonal().setConstant(
                -A.spec().tgrid.eta * A.q_values()[static_cast<std::size_t>(s - 1)]);
    }
    if (kind != DenseKind::ForwardAhat) {
        const std::int64_t r = static_cast<std::int64_t>(S) * N;
        M.block(r, (S - 1) * N, N, N).setIdentity();
        M.block(r, r, N, N) =
            A.scale_reg() * A.diagonals().D2.row(S - 1).transpose().asDiagonal() * Bd;
    }
    return {std::move(M), kind};
}

std::vector<std::complex<double>> eigenvalues_dense(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw EigensolverError("dense eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<std::complex<double>> eigenvalues_preconditioned(const Eigen::MatrixXd& P,
                                                             const Eigen::MatrixXd& A) {
    if (P.rows() != A.rows() || P.cols() != A.cols())
        throw DimensionError("eigenvalues_preconditioned: P and A sizes differ");
    const Eigen::MatrixXd PA = Eigen::PartialPivLU<Eigen::MatrixXd>(P).solve(A);
    return eigenvalues_dense(PA);
}

double condition_number_2(const Eigen::MatrixXd& M) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    if (smin == 0.0)
        return std::numeric_limits<double>::infinity();
    return sv[0] / smin;
}

double condition_number_preconditioned(const Eigen::MatrixXd& P, const Eigen::MatrixXd& A) {
    if (P.rows() != A.rows() || P.cols() != A.cols())
        throw DimensionError("condition_number_preconditioned: P and A sizes differ");
    const Eigen::MatrixXd PA = Eigen::PartialPivLU<Eigen::MatrixXd>(P).solve(A);
    return condition_number_2(PA);
}

SpectralSummary spectral_summary(const Eigen::MatrixXd& M, double cluster_tol) {
    SpectralSummary out;
    out.eigenvalues = eigenvalues_dense(M);
    out.cond_2 = condition_number_2(M);
    for (const auto& ev : out.eigenvalues) {
        if (std::abs(ev - std::complex<double>(1.0, 0.0)) <= cluster_tol)
            ++out.cluster_count;
        else
            ++out.outlier_count;
    }
    return out;
}

} // namespace fracinv
