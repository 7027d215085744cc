#include "fracinv/system.hpp"

#include "fracinv/errors.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace fracinv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sum_coords(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0);
}

Eigen::VectorXd sample_space(const SpaceGrid& grid, const std::function<double(const std::vector<double>&)>& f) {
    const auto nodes = grid.nodes();
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k)
        out[static_cast<Eigen::Index>(k)] = f(nodes[k]);
    return out;
}

} // namespace

ProblemSpec make_problem(const std::string& preset, double beta, double omega,
                         const std::vector<int>& n, int S, double lambda, double noise_eps) {
    const int d = static_cast<int>(n.size());
    std::vector<double> lo(static_cast<std::size_t>(d), 0.0);
    std::vector<double> hi(static_cast<std::size_t>(d), kPi);
    SpaceGrid grid(n, lo, hi);
    const double T = 1.0;

    SpaceTimeField g1, g2;
    TimeField q;
    std::function<double(const std::vector<double>&)> f;
    if (preset == "paper1d") {
        if (d != 1)
            throw ConfigError("preset 'paper1d' is one-dimensional");
        g1 = [](const std::vector<double>& x, double t) { return t * std::exp(x[0]); };
        g2 = [](const std::vector<double>& x, double t) { return t * t * x[0]; };
        q = [](double t) { return t * t; };
        f = [](const std::vector<double>& x) { return x[0] * std::sin(x[0]); };
    } else if (preset == "constant") {
        g1 = [](const std::vector<double>&, double) { return 1.0; };
        g2 = [](const std::vector<double>&, double) { return 1.0; };
        q = [](double) { return 1.0; };
        f = [](const std::vector<double>& x) {
            const double s = sum_coords(x);
            return s * std::sin(s);
        };
    } else {
        throw ConfigError("unknown preset '" + preset + "' (expected 'paper1d' or 'constant')");
    }

    const std::int64_t N = grid.total();
    ProblemSpec spec{FractionalOrders(beta, omega),
                     grid,
                     time_grid(beta, S, T),
                     std::move(g1),
                     std::move(g2),
                     std::move(q),
                     Eigen::VectorXd::Zero(N),
                     sample_space(grid, f),
                     lambda,
                     noise_eps,
                     preset};
    if (!(lambda > 0.0))
        throw std::domain_error("regularization parameter lambda must be positive");
    if (noise_eps < 0.0)
        throw std::domain_error("noise level eps must be nonnegative");
    return spec;
}

ProblemSpec make_custom_problem(FractionalOrders orders, SpaceGrid sgrid, int S, double T,
                                SpaceTimeField gamma1, SpaceTimeField gamma2, TimeField q,
                                Eigen::VectorXd rho, Eigen::VectorXd f_true,
                                double lambda, double noise_eps) {
    const std::int64_t N = sgrid.total();
    if (rho.size() != N || f_true.size() != N)
        throw DimensionError("make_custom_problem: rho/f_true must have length N(n)");
    if (!(lambda > 0.0))
        throw std::domain_error("regularization parameter lambda must be positive");
    if (noise_eps < 0.0)
        throw std::domain_error("noise level eps must be nonnegative");
    return ProblemSpec{orders,
                       std::move(sgrid),
                       time_grid(orders.beta, S, T),
                       std::move(gamma1),
                       std::move(gamma2),
                       std::move(q),
                       std::move(rho),
                       std::move(f_true),
                       lambda,
                       noise_eps,
                       "custom"};
}

CoefficientDiagonals sample_fields(const ProblemSpec& spec) {
    const std::int64_t N = spec.sgrid.total();
    const int S = spec.tgrid.S;
    const auto nodes = spec.sgrid.nodes();
    CoefficientDiagonals diags;
    diags.D1.resize(S, N);
    diags.D2.resize(S, N);
    for (int s = 1; s <= S; ++s) {
        const double t = s * spec.tgrid.dt;
        for (std::int64_t j = 0; j < N; ++j) {
            diags.D1(s - 1, j) = spec.gamma1(nodes[static_cast<std::size_t>(j)], t);
            diags.D2(s - 1, j) = spec.gamma2(nodes[static_cast<std::size_t>(j)], t);
        }
    }
    return diags;
}

SystemOperator::SystemOperator(ProblemSpec spec)
    : spec_(std::move(spec)),
      diags_(sample_fields(spec_)),
      weights_(l1_weights(spec_.orders.beta, spec_.tgrid.S)),
      N_(spec_.sgrid.total()) {
    toeplitz_ = std::make_unique<ToeplitzOperator>(
        spec_.sgrid, spec_.sgrid.d == 1 ? symbol_coeffs_1d(spec_.orders.omega, spec_.sgrid.n[0])
                                        : symbol_coeffs_md(spec_.orders.omega, spec_.sgrid.n));
    const int S = spec_.tgrid.S;
    q_.resize(static_cast<std::size_t>(S));
    for (int s = 1; s <= S; ++s) {
        q_[static_cast<std::size_t>(s - 1)] = spec_.q(s * spec_.tgrid.dt);
        if (!(q_[static_cast<std::size_t>(s - 1)] > 0.0))
            throw std::domain_error("q(t) must be positive at every time level, violated at s = " +
                                    std::to_string(s));
    }
    if (spec_.rho.size() != N_ || spec_.f_true.size() != N_)
        throw DimensionError("SystemOperator: rho/f_true must have length N(n)");
    const double hw = std::pow(spec_.sgrid.h, spec_.orders.omega);
    scale_space_ = spec_.tgrid.eta / hw;
    scale_reg_ = spec_.lambda / hw;
}

Eigen::VectorXd SystemOperator::apply(const Eigen::VectorXd& y) const {
    if (y.size() != dim())
        throw DimensionError("SystemOperator::apply: vector length " + std::to_string(y.size()) +
                             " does not match operator dimension " + std::to_string(dim()));
    const int S = steps();
    const auto& e = weights_.e;
    Eigen::VectorXd z(dim());
    Eigen::VectorXd w(N_), By(N_);
    ToeplitzOperator::Workspace ws = toeplitz_->make_workspace();

    const auto block = [this](const Eigen::VectorXd& v, int s) {
        return v.segment(static_cast<Eigen::Index>(s - 1) * N_, N_);
    };
    const auto fblock = y.tail(N_);

    for (int s = 1; s <= S; ++s) {
        // w = sum_{m=1..s} e_{s-m} y^{(m)}, then scaled by D1^{(s)}
        w.setZero();
        for (int m = 1; m <= s; ++m)
            w += e[static_cast<std::size_t>(s - m)] * block(y, m);
        w.array() *= diags_.D1.row(s - 1).transpose().array();
        toeplitz_->apply(block(y, s), By, ws);
        w.array() += scale_space_ * diags_.D2.row(s - 1).transpose().array() * By.array();
        w -= spec_.tgrid.eta * q_[static_cast<std::size_t>(s - 1)] * fblock;
        z.segment(static_cast<Eigen::Index>(s - 1) * N_, N_) = w;
    }

    toeplitz_->apply(fblock, By, ws);
    z.tail(N_) = block(y, S).array() + scale_reg_ * diags_.D2.row(S - 1).transpose().array() * By.array();
    return z;
}

RhsVector build_rhs(const SystemOperator& A, const Eigen::VectorXd& mu_eps) {
    const std::int64_t N = A.space_dim();
    if (mu_eps.size() != N)
        throw DimensionError("build_rhs: mu_eps must have length N(n)");
    const int S = A.steps();
    const auto& b = A.weights().b;
    RhsVector rhs;
    rhs.z.resize(A.dim());
    for (int s = 1; s <= S; ++s)
        rhs.z.segment(static_cast<Eigen::Index>(s - 1) * N, N) =
            b[static_cast<std::size_t>(s - 1)] *
            (A.diagonals().D1.row(s - 1).transpose().array() * A.spec().rho.array()).matrix();
    rhs.z.tail(N) = mu_eps;
    return rhs;
}

ForwardSolution forward_solve(const SystemOperator& A) {
    const std::int64_t N = A.space_dim();
    const int S = A.steps();
    const auto& e = A.weights().e;
    const auto& b = A.weights().b;
    const double eta = A.spec().tgrid.eta;
    const Eigen::MatrixXd Bd = A.laplacian().dense(N);  // cap = N: always assembled

    ForwardSolution sol;
    sol.states.reserve(static_cast<std::size_t>(S));
    Eigen::MatrixXd blk(N, N);
    for (int s = 1; s <= S; ++s) {
        const auto d1 = A.diagonals().D1.row(s - 1).transpose();
        const auto d2 = A.diagonals().D2.row(s - 1).transpose();
        blk = A.scale_space() * d2.asDiagonal() * Bd;
        blk.diagonal() += e[0] * d1;

        Eigen::VectorXd rhs = b[static_cast<std::size_t>(s - 1)] * (d1.array() * A.spec().rho.array()).matrix() +
                              eta * A.q_values()[static_cast<std::size_t>(s - 1)] * A.spec().f_true;
        for (int m = 1; m < s; ++m)
            rhs -= e[static_cast<std::size_t>(s - m)] * (d1.array() * sol.states[static_cast<std::size_t>(m - 1)].array()).matrix();

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(blk);
        const auto diag = lu.matrixLU().diagonal().cwiseAbs();
        const double dmax = diag.maxCoeff();
        if (dmax == 0.0 || diag.minCoeff() <= 1e-14 * dmax)
            throw SingularBlockError("forward_solve: singular diagonal block at time level " +
                                     std::to_string(s), s);
        sol.states.push_back(lu.solve(rhs));
    }
    sol.mu = sol.states.back();
    return sol;
}

namespace {

// SplitMix64 output for the j-th element of the stream seeded at `seed`;
// the state advance is a fixed increment, so stream element j is available
// in O(1) without materializing the sequence.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t j) {
    std::uint64_t z = seed + (j + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

Eigen::VectorXd add_noise(const Eigen::VectorXd& mu, double eps, std::uint64_t seed) {
    if (eps < 0.0)
        throw std::domain_error("add_noise requires eps >= 0");
    Eigen::VectorXd out(mu.size());
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
        // top 53 bits, centered into the open interval (-1, 1)
        const double u = (static_cast<double>(splitmix64_at(seed, static_cast<std::uint64_t>(j)) >> 11) + 0.5) *
                         (1.0 / 9007199254740992.0);
        out[j] = mu[j] + eps * (2.0 * u - 1.0);
    }
    return out;
}

Eigen::VectorXd extract_reconstruction(const Eigen::VectorXd& y, std::int64_t space_dim) {
    if (y.size() % space_dim != 0 || y.size() < 2 * space_dim)
        throw DimensionError("extract_reconstruction: vector is not a stacked block vector");
    return y.tail(space_dim);
}

double relative_error(const Eigen::VectorXd& truth, const Eigen::VectorXd& approx) {
    if (truth.size() != approx.size())
        throw DimensionError("relative_error: size mismatch");
    return (truth - approx).norm() / truth.norm();
}

} // namespace fracinv
