#pragma once

#include "fracinv/system.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace fracinv {

/// Outcome of one GMRES run. residual_history[k] is the (preconditioned)
/// relative residual after k iterations, entry 0 being the initial residual;
/// full GMRES makes the sequence non-increasing.
struct SolveReport {
    int iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
    bool breakdown = false;  ///< Arnoldi produced a (numerically) zero vector
    double wall_time_seconds = 0.0;
    double final_true_residual = 0.0;  ///< ||b - A y|| / ||b||, unpreconditioned
};

/// Lower block-triangular preconditioner: the system matrix with the last
/// block column zeroed above the regularization row. All S+1 diagonal blocks
/// are assembled densely once, LU-factorized with partial pivoting and
/// cached; application is block forward substitution. Immutable after
/// construction and shareable across threads.
///
/// Holds references into the SystemOperator, which must outlive it.
class BlockTriangularPreconditioner {
public:
    static constexpr std::int64_t kDefaultBlockCap = 4096;

    explicit BlockTriangularPreconditioner(const SystemOperator& A,
                                           std::int64_t block_cap = kDefaultBlockCap);

    std::int64_t dim() const noexcept { return (S_ + 1) * N_; }

    /// Solves P y = z by forward substitution over the cached factors.
    Eigen::VectorXd apply(const Eigen::VectorXd& z) const;

private:
    const SystemOperator& A_;
    std::int64_t N_;
    int S_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> factors_;  ///< S diagonal blocks + final block
};

using LinearOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresOptions {
    double tol = 1e-8;
    int maxit = 0;  ///< 0 selects the matrix dimension
};

/// Full (non-restarted) GMRES on the left-preconditioned system
/// M^{-1} A y = M^{-1} b; pass an empty apply_M_inv for no preconditioning.
/// Arnoldi uses modified Gram-Schmidt with one conditional reorthogonalization
/// pass; the least-squares problem is updated per iteration with Givens
/// rotations. Convergence is declared on the preconditioned relative
/// residual. A numerically zero Arnoldi vector ends the iteration with the
/// solution in the current subspace (breakdown flag set if that solution has
/// not converged).
std::pair<Eigen::VectorXd, SolveReport> gmres(const LinearOp& apply_A, const LinearOp& apply_M_inv,
                                              const Eigen::VectorXd& b, const GmresOptions& opts = {},
                                              const Eigen::VectorXd* x0 = nullptr);

} // namespace fracinv
