#include "fracinv/experiment.hpp"

#include "fracinv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fracinv {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // canonicalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

template <typename T>
std::vector<T> as_list(const nlohmann::json& j, const std::string& key) {
    std::vector<T> out;
    const auto& v = j.at(key);
    if (v.is_array()) {
        for (const auto& item : v) out.push_back(item.get<T>());
    } else {
        out.push_back(v.get<T>());
    }
    return out;
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    require(j.is_object(), "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "preset") {
            cfg.preset = value.get<std::string>();
        } else if (key == "beta") {
            cfg.beta = value.get<double>();
        } else if (key == "omega") {
            cfg.omega = value.get<double>();
        } else if (key == "orders") {
            require(value.is_array(), "'orders' must be an array of [beta, omega] pairs");
            cfg.orders.clear();
            for (const auto& pair : value) {
                require(pair.is_array() && pair.size() == 2, "'orders' entries must be [beta, omega]");
                cfg.orders.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
        } else if (key == "n") {
            cfg.n = as_list<int>(j, key);
        } else if (key == "S") {
            cfg.S = as_list<int>(j, key);
        } else if (key == "lambda") {
            cfg.lambda_sweep = as_list<double>(j, key);
            require(!cfg.lambda_sweep.empty(), "'lambda' list must be non-empty");
            cfg.lambda = cfg.lambda_sweep.front();
        } else if (key == "eps") {
            cfg.eps_sweep = as_list<double>(j, key);
            require(!cfg.eps_sweep.empty(), "'eps' list must be non-empty");
            cfg.eps = cfg.eps_sweep.front();
        } else if (key == "seed") {
            cfg.seeds = as_list<std::uint64_t>(j, key);
            require(!cfg.seeds.empty(), "'seed' list must be non-empty");
            cfg.seed = cfg.seeds.front();
        } else if (key == "precond") {
            const auto s = value.get<std::string>();
            if (s == "none")
                cfg.use_precond = false;
            else if (s == "block-tri" || s == "block_tri")
                cfg.use_precond = true;
            else
                throw ConfigError("unknown precond '" + s + "' (expected 'none' or 'block-tri')");
        } else if (key == "tol") {
            cfg.tol = value.get<double>();
        } else if (key == "maxit") {
            cfg.maxit = value.get<int>();
        } else if (key == "mode") {
            cfg.mode = value.get<std::string>();
        } else if (key == "out") {
            cfg.out = value.get<std::string>();
        } else if (key == "workers") {
            cfg.workers = value.get<int>();
        } else if (key == "dense_cap") {
            cfg.dense_cap = value.get<std::int64_t>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    require(!cfg.n.empty(), "'n' must be non-empty");
    require(!cfg.S.empty(), "'S' must be non-empty");
    require(cfg.tol > 0.0, "'tol' must be positive");
    require(cfg.workers >= 1, "'workers' must be at least 1");
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["preset"] = cfg.preset;
    j["beta"] = cfg.beta;
    j["omega"] = cfg.omega;
    j["n"] = cfg.n;
    j["S"] = cfg.S.front();
    j["lambda"] = cfg.lambda;
    j["eps"] = cfg.eps;
    j["seed"] = cfg.seed;
    j["precond"] = cfg.use_precond ? "block-tri" : "none";
    j["tol"] = cfg.tol;
    j["maxit"] = cfg.maxit;
    return j;
}

namespace {

std::string sanitize_for_csv(std::string msg) {
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

void check_cli_omega(double omega) {
    if (!(omega > 1.0 && omega <= 2.0))
        throw ConfigError("omega must lie in (1,2] for the fractional Laplacian symbol, got " +
                          std::to_string(omega));
}

SymbolCoefficients coeffs_for(double omega, const std::vector<int>& n) {
    return n.size() == 1 ? symbol_coeffs_1d(omega, n[0]) : symbol_coeffs_md(omega, n);
}

} // namespace

std::string run_coeffs(const ExperimentConfig& cfg) {
    check_cli_omega(cfg.omega);
    const auto& n = cfg.n;
    require(n.size() <= 2, "coeffs supports d in {1,2}");
    const SymbolCoefficients sym = coeffs_for(cfg.omega, n);

    std::ostringstream os;
    if (n.size() == 1) {
        os << "l,a_l\n";
        for (int l = -(n[0] - 1); l <= n[0] - 1; ++l)
            os << l << ',' << format_double(sym.at(l)) << '\n';
    } else {
        os << "l1,l2,a_l\n";
        for (int l1 = -(n[0] - 1); l1 <= n[0] - 1; ++l1)
            for (int l2 = -(n[1] - 1); l2 <= n[1] - 1; ++l2)
                os << l1 << ',' << l2 << ',' << format_double(sym.at({l1, l2})) << '\n';
    }
    return os.str();
}

namespace {

std::string eigenvalue_csv(const std::vector<std::complex<double>>& evs) {
    std::ostringstream os;
    os << "re,im\n";
    for (const auto& ev : evs)
        os << format_double(ev.real()) << ',' << format_double(ev.imag()) << '\n';
    return os.str();
}

} // namespace

SpectrumOutput run_spectrum(const ExperimentConfig& cfg) {
    const SystemOperator op(
        make_problem(cfg.preset, cfg.beta, cfg.omega, cfg.n, cfg.S.front(), cfg.lambda, cfg.eps));
    const auto A = assemble_dense_system(op, DenseKind::SystemA, cfg.dense_cap);
    const auto P = assemble_dense_system(op, DenseKind::PreconditionerP, cfg.dense_cap);
    return {eigenvalue_csv(eigenvalues_dense(A.matrix)),
            eigenvalue_csv(eigenvalues_preconditioned(P.matrix, A.matrix))};
}

namespace {

struct SweepPoint {
    double beta, omega;
    int n, S;
    double lambda, eps;
};

std::vector<SweepPoint> sweep_grid(const ExperimentConfig& cfg) {
    std::vector<std::pair<double, double>> orders = cfg.orders;
    if (orders.empty()) orders.emplace_back(cfg.beta, cfg.omega);
    std::vector<double> lambdas = cfg.lambda_sweep.empty() ? std::vector<double>{cfg.lambda} : cfg.lambda_sweep;
    std::vector<double> epss = cfg.eps_sweep.empty() ? std::vector<double>{cfg.eps} : cfg.eps_sweep;

    require(!cfg.n.empty() && !cfg.S.empty(), "sweep requires non-empty n and S lists");
    std::vector<SweepPoint> grid;
    for (const auto& [b, w] : orders)
        for (int nv : cfg.n)
            for (int Sv : cfg.S)
                for (double lv : lambdas)
                    for (double ev : epss)
                        grid.push_back({b, w, nv, Sv, lv, ev});
    return grid;
}

/// Runs row jobs over a small worker pool; results land in input order.
template <typename Job>
void run_rows(int workers, std::size_t count, const Job& job) {
    workers = std::max(1, workers);
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) job(i);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers - 1; ++t) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
}

struct PipelineResult {
    SolveReport unprec;
    SolveReport prec;
    double recon_error = 0.0;
    Eigen::VectorXd f_recon;
    bool ran_unprec = false;
    bool ran_prec = false;
};

/// Shared solve pipeline: manufacture data, add noise, solve, reconstruct.
PipelineResult solve_pipeline(const SystemOperator& op, const BlockTriangularPreconditioner* P,
                              bool run_unprec, double eps, std::uint64_t seed, double tol, int maxit) {
    const Eigen::VectorXd mu = forward_solve(op).mu;
    const Eigen::VectorXd mu_eps = add_noise(mu, eps, seed);
    const RhsVector rhs = build_rhs(op, mu_eps);
    const LinearOp apply_A = [&op](const Eigen::VectorXd& v) { return op.apply(v); };

    PipelineResult out;
    Eigen::VectorXd y;
    if (P) {
        const LinearOp apply_P = [P](const Eigen::VectorXd& v) { return P->apply(v); };
        std::tie(y, out.prec) = gmres(apply_A, apply_P, rhs.z, {tol, maxit});
        out.ran_prec = true;
    }
    if (run_unprec || !P) {
        Eigen::VectorXd yu;
        std::tie(yu, out.unprec) = gmres(apply_A, LinearOp{}, rhs.z, {tol, maxit});
        out.ran_unprec = true;
        if (!P) y = std::move(yu);
    }
    out.f_recon = extract_reconstruction(y, op.space_dim());
    out.recon_error = relative_error(op.spec().f_true, out.f_recon);
    return out;
}

} // namespace

std::string run_cond(const ExperimentConfig& cfg) {
    const auto grid = sweep_grid(cfg);
    require(!grid.empty(), "cond requires a non-empty sweep grid");

    std::vector<std::string> rows(grid.size());
    run_rows(cfg.workers, grid.size(), [&](std::size_t i) {
        const auto& p = grid[i];
        std::ostringstream os;
        os << format_double(p.beta) << ',' << format_double(p.omega) << ',' << p.n << ',' << p.S
           << ',' << format_double(p.lambda) << ',' << format_double(p.eps) << ',' << cfg.seed << ',';
        try {
            const SystemOperator op(
                make_problem(cfg.preset, p.beta, p.omega, {p.n}, p.S, p.lambda, p.eps));
            const auto A = assemble_dense_system(op, DenseKind::SystemA, cfg.dense_cap);
            const auto P = assemble_dense_system(op, DenseKind::PreconditionerP, cfg.dense_cap);
            os << format_double(condition_number_2(A.matrix)) << ','
               << format_double(condition_number_preconditioned(P.matrix, A.matrix)) << ',';
        } catch (const std::exception& ex) {
            os << ",," << sanitize_for_csv(ex.what());
        }
        os << '\n';
        rows[i] = os.str();
    });

    std::string csv = "beta,omega,n,S,lambda,eps,seed,cond_unprec,cond_prec,error\n";
    for (auto& r : rows) csv += r;
    return csv;
}

SolveOutcome run_solve(const ExperimentConfig& cfg) {
    const SystemOperator op(
        make_problem(cfg.preset, cfg.beta, cfg.omega, cfg.n, cfg.S.front(), cfg.lambda, cfg.eps));
    std::unique_ptr<BlockTriangularPreconditioner> P;
    if (cfg.use_precond)
        P = std::make_unique<BlockTriangularPreconditioner>(op, cfg.dense_cap);

    const PipelineResult res =
        solve_pipeline(op, P.get(), /*run_unprec=*/!cfg.use_precond, cfg.eps, cfg.seed, cfg.tol, cfg.maxit);
    const SolveReport& rep = cfg.use_precond ? res.prec : res.unprec;

    SolveOutcome out;
    out.converged = rep.converged;
    out.report["iterations"] = rep.iterations;
    out.report["converged"] = rep.converged;
    out.report["residual_history"] = rep.residual_history;
    out.report["final_true_residual"] = rep.final_true_residual;
    out.report["recon_error"] = res.recon_error;
    out.report["wall_time_seconds"] = rep.wall_time_seconds;
    out.report["config"] = config_to_json(cfg);

    const auto nodes = op.spec().sgrid.nodes();
    std::ostringstream os;
    if (op.spec().sgrid.d == 1)
        os << "x,f_true,f_recon\n";
    else {
        for (int i = 0; i < op.spec().sgrid.d; ++i) os << 'x' << (i + 1) << ',';
        os << "f_true,f_recon\n";
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        for (double c : nodes[j]) os << format_double(c) << ',';
        os << format_double(op.spec().f_true[static_cast<Eigen::Index>(j)]) << ','
           << format_double(res.f_recon[static_cast<Eigen::Index>(j)]) << '\n';
    }
    out.recon_csv = os.str();
    return out;
}

std::string run_sweep(const ExperimentConfig& cfg) {
    require(cfg.mode == "cond" || cfg.mode == "gmres" || cfg.mode == "recon",
            "sweep requires mode 'cond', 'gmres' or 'recon'");
    if (cfg.mode == "cond") return run_cond(cfg);

    const auto grid = sweep_grid(cfg);
    require(!grid.empty(), "sweep requires a non-empty grid");
    const std::vector<std::uint64_t> seeds = cfg.seeds.empty() ? std::vector<std::uint64_t>{cfg.seed} : cfg.seeds;

    std::vector<std::string> rows(grid.size());
    run_rows(cfg.workers, grid.size(), [&](std::size_t i) {
        const auto& p = grid[i];
        std::ostringstream os;
        os << format_double(p.beta) << ',' << format_double(p.omega) << ',' << p.n << ',' << p.S
           << ',' << format_double(p.lambda) << ',' << format_double(p.eps) << ',' << seeds.front() << ',';
        try {
            const SystemOperator op(
                make_problem(cfg.preset, p.beta, p.omega, {p.n}, p.S, p.lambda, p.eps));
            const BlockTriangularPreconditioner P(op, cfg.dense_cap);
            if (cfg.mode == "gmres") {
                const PipelineResult res = solve_pipeline(op, &P, /*run_unprec=*/true, p.eps,
                                                          seeds.front(), cfg.tol, cfg.maxit);
                os << res.unprec.iterations << ',' << res.prec.iterations << ','
                   << format_double(res.unprec.wall_time_seconds) << ','
                   << format_double(res.prec.wall_time_seconds) << ',';
            } else {  // recon
                double sum = 0.0;
                for (std::uint64_t sd : seeds) {
                    const PipelineResult res =
                        solve_pipeline(op, &P, /*run_unprec=*/false, p.eps, sd, cfg.tol, cfg.maxit);
                    sum += res.recon_error;
                }
                os << seeds.size() << ',' << format_double(sum / static_cast<double>(seeds.size())) << ',';
            }
        } catch (const std::exception& ex) {
            os << (cfg.mode == "gmres" ? ",,,," : ",,") << sanitize_for_csv(ex.what());
        }
        os << '\n';
        rows[i] = os.str();
    });

    std::string csv = cfg.mode == "gmres"
                          ? "beta,omega,n,S,lambda,eps,seed,iters_unprec,iters_prec,cpu_unprec,cpu_prec,error\n"
                          : "beta,omega,n,S,lambda,eps,seed,nseeds,recon_error,error\n";
    for (auto& r : rows) csv += r;
    return csv;
}

} // namespace fracinv
