#pragma once

#include "fracinv/numerics.hpp"
#include "fracinv/symbol.hpp"
#include "fracinv/toeplitz.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fracinv {

/// Scalar field over space-time; x carries the d coordinates of a node.
using SpaceTimeField = std::function<double(const std::vector<double>& x, double t)>;
/// Scalar field over time only.
using TimeField = std::function<double(double t)>;

/// Full description of one regularized inverse-source problem instance.
/// gamma2 must be nonzero on the grid at the final time or the
/// regularization block becomes singular; this is detected where the block
/// is factorized rather than here.
struct ProblemSpec {
    FractionalOrders orders;
    SpaceGrid sgrid;
    TimeGrid tgrid;
    SpaceTimeField gamma1;
    SpaceTimeField gamma2;
    TimeField q;                 ///< must be positive at every time level
    Eigen::VectorXd rho;         ///< initial condition samples, length N(n)
    Eigen::VectorXd f_true;      ///< exact source samples, length N(n)
    double lambda = 5e-3;        ///< regularization parameter, > 0
    double noise_eps = 0.0;      ///< relative noise level, >= 0
    std::string preset = "custom";
};

/// Named coefficient presets accepted by the CLI.
///  - "paper1d":  Omega=(0,pi), T=1, gamma1=t*e^x, gamma2=t^2*x, q=t^2,
///                rho=0, f=x*sin(x); 1D only.
///  - "constant": gamma1=gamma2=1, q=1, rho=0, f=(sum x_i)*sin(sum x_i);
///                any dimension, Omega=(0,pi)^d, T=1.
ProblemSpec make_problem(const std::string& preset, double beta, double omega,
                         const std::vector<int>& n, int S, double lambda, double noise_eps);

/// Fully custom problem for tests and library use.
ProblemSpec make_custom_problem(FractionalOrders orders, SpaceGrid sgrid, int S, double T,
                                SpaceTimeField gamma1, SpaceTimeField gamma2, TimeField q,
                                Eigen::VectorXd rho, Eigen::VectorXd f_true,
                                double lambda, double noise_eps);

/// Samples of the variable coefficients on the grid: row s-1 holds the
/// diagonal of D_k^{(s)} = diag gamma_k(x_j, t_s), s = 1..S.
struct CoefficientDiagonals {
    Eigen::MatrixXd D1;  ///< S x N(n)
    Eigen::MatrixXd D2;  ///< S x N(n)
};

CoefficientDiagonals sample_fields(const ProblemSpec& spec);

/// Right-hand side of the block system: blocks b_{s-1} D1^{(s)} rho for
/// s = 1..S, then the (noisy) final-time data.
struct RhsVector {
    Eigen::VectorXd z;
};

/// Matrix-free representation of the (S+1)N(n) block system matrix. The
/// operator is immutable after construction and shareable across threads;
/// apply() uses a per-call workspace.
class SystemOperator {
public:
    explicit SystemOperator(ProblemSpec spec);

    const ProblemSpec& spec() const noexcept { return spec_; }
    const CoefficientDiagonals& diagonals() const noexcept { return diags_; }
    const L1Weights& weights() const noexcept { return weights_; }
    const ToeplitzOperator& laplacian() const noexcept { return *toeplitz_; }
    const std::vector<double>& q_values() const noexcept { return q_; }

    std::int64_t space_dim() const noexcept { return N_; }
    int steps() const noexcept { return spec_.tgrid.S; }
    std::int64_t dim() const noexcept { return (steps() + 1) * N_; }

    double scale_space() const noexcept { return scale_space_; }  ///< eta / h^omega
    double scale_reg() const noexcept { return scale_reg_; }      ///< lambda / h^omega

    /// Two-phase matrix-vector product z = A y:
    /// block s = D1^{(s)} sum_{m<=s} e_{s-m} y^{(m)}
    ///           + (eta/h^w) D2^{(s)} B y^{(s)} - eta q^{(s)} y^{(S+1)},
    /// final block = y^{(S)} + (lambda/h^w) D2^{(S)} B y^{(S+1)}.
    Eigen::VectorXd apply(const Eigen::VectorXd& y) const;

private:
    ProblemSpec spec_;
    CoefficientDiagonals diags_;
    L1Weights weights_;
    std::unique_ptr<ToeplitzOperator> toeplitz_;
    std::vector<double> q_;  ///< q(t_s), s = 1..S
    std::int64_t N_ = 0;
    double scale_space_ = 0.0;
    double scale_reg_ = 0.0;
};

RhsVector build_rhs(const SystemOperator& A, const Eigen::VectorXd& mu_eps);

/// Direct (forward) problem solution by block forward substitution on the
/// lower-triangular time-stepping system; produces the states v^{(s)} and
/// the exact final-time data mu = v^{(S)}. Requires f_true.
/// Throws SingularBlockError naming the offending time level.
struct ForwardSolution {
    std::vector<Eigen::VectorXd> states;  ///< S vectors of length N(n)
    Eigen::VectorXd mu;                   ///< = states.back()
};

ForwardSolution forward_solve(const SystemOperator& A);

/// Additive noise mu_eps[j] = mu[j] + eps * delta_j with delta_j uniform on
/// (-1,1), so E||mu_eps - mu||_2 ~ eps * sqrt(N/3). The stream is SplitMix64
/// split by grid index: delta_j is derived from the j-th output of the
/// SplitMix64 sequence seeded at `seed`, so results are identical across
/// platforms and runs.
Eigen::VectorXd add_noise(const Eigen::VectorXd& mu, double eps, std::uint64_t seed);

/// Final block f~ of the stacked unknown vector [v^(1); ...; v^(S); f~].
Eigen::VectorXd extract_reconstruction(const Eigen::VectorXd& y, std::int64_t space_dim);

/// || truth - approx ||_2 / || truth ||_2.
double relative_error(const Eigen::VectorXd& truth, const Eigen::VectorXd& approx);

} // namespace fracinv
