#include "fracinv/krylov.hpp"

#include "fracinv/errors.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracinv {

namespace {

void check_pivots(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, int time_index, const char* what) {
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = diag.maxCoeff();
    if (dmax == 0.0 || diag.minCoeff() <= 1e-14 * dmax)
        throw SingularBlockError(std::string(what) + ": singular block at time level " +
                                 std::to_string(time_index), time_index);
}

} // namespace

BlockTriangularPreconditioner::BlockTriangularPreconditioner(const SystemOperator& A,
                                                             std::int64_t block_cap)
    : A_(A), N_(A.space_dim()), S_(A.steps()) {
    if (N_ > block_cap)
        throw ResourceLimitError("BlockTriangularPreconditioner: block dimension " + std::to_string(N_) +
                                 " exceeds cap " + std::to_string(block_cap));
    const Eigen::MatrixXd Bd = A.laplacian().dense(block_cap);
    const auto& e = A.weights().e;

    factors_.reserve(static_cast<std::size_t>(S_) + 1);
    Eigen::MatrixXd blk(N_, N_);
    for (int s = 1; s <= S_; ++s) {
        const auto d1 = A.diagonals().D1.row(s - 1).transpose();
        const auto d2 = A.diagonals().D2.row(s - 1).transpose();
        blk = A.scale_space() * d2.asDiagonal() * Bd;
        blk.diagonal() += e[0] * d1;
        factors_.emplace_back(blk);
        check_pivots(factors_.back(), s, "precond_build");
    }
    blk = A.scale_reg() * A.diagonals().D2.row(S_ - 1).transpose().asDiagonal() * Bd;
    factors_.emplace_back(blk);
    check_pivots(factors_.back(), S_ + 1, "precond_build");
}

Eigen::VectorXd BlockTriangularPreconditioner::apply(const Eigen::VectorXd& z) const {
    if (z.size() != dim())
        throw DimensionError("precond_apply: vector length " + std::to_string(z.size()) +
                             " does not match preconditioner dimension " + std::to_string(dim()));
    const auto& e = A_.weights().e;
    Eigen::VectorXd y(dim());
    Eigen::VectorXd rhs(N_);
    for (int s = 1; s <= S_; ++s) {
        rhs = z.segment(static_cast<Eigen::Index>(s - 1) * N_, N_);
        if (s > 1) {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(N_);
            for (int m = 1; m < s; ++m)
                acc += e[static_cast<std::size_t>(s - m)] *
                       y.segment(static_cast<Eigen::Index>(m - 1) * N_, N_);
            rhs -= (A_.diagonals().D1.row(s - 1).transpose().array() * acc.array()).matrix();
        }
        y.segment(static_cast<Eigen::Index>(s - 1) * N_, N_) =
            factors_[static_cast<std::size_t>(s - 1)].solve(rhs);
    }
    rhs = z.tail(N_) - y.segment(static_cast<Eigen::Index>(S_ - 1) * N_, N_);
    y.tail(N_) = factors_.back().solve(rhs);
    return y;
}

std::pair<Eigen::VectorXd, SolveReport> gmres(const LinearOp& apply_A, const LinearOp& apply_M_inv,
                                              const Eigen::VectorXd& b, const GmresOptions& opts,
                                              const Eigen::VectorXd* x0) {
    const auto t_start = std::chrono::steady_clock::now();
    if (!(opts.tol > 0.0))
        throw std::domain_error("gmres requires tol > 0");
    const Eigen::Index n = b.size();
    const int maxit = opts.maxit > 0 ? opts.maxit : static_cast<int>(n);

    const auto precondition = [&](const Eigen::VectorXd& v) {
        return apply_M_inv ? apply_M_inv(v) : v;
    };

    SolveReport report;
    Eigen::VectorXd x = x0 ? *x0 : Eigen::VectorXd::Zero(n);

    const Eigen::VectorXd pb = precondition(b);
    const double bnorm = pb.norm();
    if (bnorm == 0.0) {
        // zero right-hand side: the solution is zero
        report.converged = true;
        report.residual_history = {0.0};
        report.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        report.final_true_residual = 0.0;
        return {Eigen::VectorXd::Zero(n), report};
    }

    Eigen::VectorXd r0 = x0 ? precondition(b - apply_A(x)).eval() : pb;
    double beta = r0.norm();
    report.residual_history.push_back(beta / bnorm);

    if (beta / bnorm <= opts.tol) {
        report.converged = true;
        report.final_true_residual = (b - apply_A(x)).norm() / b.norm();
        report.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return {x, report};
    }

    // basis and Hessenberg columns grow one iteration at a time; the upfront
    // maxit-sized allocation would dominate memory on converging runs
    std::vector<Eigen::VectorXd> V;
    V.emplace_back(r0 / beta);
    std::vector<std::vector<double>> hcols;  // rotated column k holds k+1 entries
    std::vector<double> g{beta}, cs, sn;

    const double breakdown_tol = 1e-14 * bnorm;
    int iters = 0;
    bool converged = false, breakdown = false;

    for (int k = 0; k < maxit; ++k) {
        Eigen::VectorXd w = precondition(apply_A(V[static_cast<std::size_t>(k)]));
        const double pre_norm = w.norm();
        std::vector<double> h(static_cast<std::size_t>(k) + 2, 0.0);
        // modified Gram-Schmidt
        for (int i = 0; i <= k; ++i) {
            const double hik = V[static_cast<std::size_t>(i)].dot(w);
            h[static_cast<std::size_t>(i)] += hik;
            w -= hik * V[static_cast<std::size_t>(i)];
        }
        // second pass when cancellation ate more than 1/sqrt(2) of the vector
        if (w.norm() < pre_norm * 0.70710678118654752) {
            for (int i = 0; i <= k; ++i) {
                const double corr = V[static_cast<std::size_t>(i)].dot(w);
                h[static_cast<std::size_t>(i)] += corr;
                w -= corr * V[static_cast<std::size_t>(i)];
            }
        }
        const double hnext = w.norm();
        h[static_cast<std::size_t>(k) + 1] = hnext;
        if (hnext > breakdown_tol)
            V.emplace_back(w / hnext);

        double col_scale = 0.0;
        for (double hv : h) col_scale = std::max(col_scale, std::abs(hv));

        // apply accumulated rotations to the new column, then fold in a new one
        for (int i = 0; i < k; ++i) {
            const double t = cs[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)] +
                             sn[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i) + 1];
            h[static_cast<std::size_t>(i) + 1] = -sn[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)] +
                                                 cs[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i) + 1];
            h[static_cast<std::size_t>(i)] = t;
        }
        const double denom = std::hypot(h[static_cast<std::size_t>(k)], h[static_cast<std::size_t>(k) + 1]);
        if (denom <= 1e-14 * col_scale || denom == 0.0) {
            // the new column is linearly dependent on the previous ones (the
            // operator is singular on the Krylov space); keep the iterate from
            // the completed iterations
            breakdown = true;
            break;
        }
        cs.push_back(h[static_cast<std::size_t>(k)] / denom);
        sn.push_back(h[static_cast<std::size_t>(k) + 1] / denom);
        h[static_cast<std::size_t>(k)] = denom;
        h.pop_back();  // subdiagonal entry is rotated away
        hcols.push_back(std::move(h));
        g.push_back(-sn.back() * g.back());
        g[static_cast<std::size_t>(k)] *= cs.back();

        const double relres = std::abs(g.back()) / bnorm;
        report.residual_history.push_back(relres);
        iters = k + 1;
        if (relres <= opts.tol) {
            converged = true;
            break;
        }
        if (hnext <= breakdown_tol) {
            // the Krylov space is exhausted; the least-squares solution in the
            // current subspace is exact up to roundoff
            breakdown = true;
            break;
        }
    }

    // back-substitute the triangular least-squares system R y = g
    if (iters > 0) {
        std::vector<double> yk(static_cast<std::size_t>(iters));
        for (int i = iters - 1; i >= 0; --i) {
            double acc = g[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < iters; ++j)
                acc -= hcols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
                       yk[static_cast<std::size_t>(j)];
            yk[static_cast<std::size_t>(i)] = acc / hcols[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        }
        for (int j = 0; j < iters; ++j)
            x += yk[static_cast<std::size_t>(j)] * V[static_cast<std::size_t>(j)];
    }

    report.iterations = iters;
    report.converged = converged || (breakdown && report.residual_history.back() <= opts.tol);
    report.breakdown = breakdown && !report.converged;
    report.final_true_residual = (b - apply_A(x)).norm() / b.norm();
    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {x, report};
}

} // namespace fracinv
