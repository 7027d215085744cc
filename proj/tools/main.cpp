#include "fracinv/errors.hpp"
#include "fracinv/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoConvergence = 4;

struct CliOptions {
    std::string config_path;
    std::optional<double> beta, omega, tol;
    std::optional<std::vector<double>> lambda, eps;
    std::optional<std::vector<int>> n;
    std::optional<std::vector<int>> S;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<std::string> preset, precond, mode, out;
    std::optional<int> maxit, workers;
    std::optional<std::int64_t> dense_cap;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--beta", o.beta, "time-fractional order in (0,1)");
    cmd->add_option("--omega", o.omega, "space-fractional order in (1,2]");
    cmd->add_option("--n", o.n, "grid size (per direction for coeffs/spectrum/solve, sweep list for cond/sweep)");
    cmd->add_option("--S", o.S, "time steps (sweep list for cond/sweep)");
    cmd->add_option("--lambda", o.lambda, "regularization parameter (list sweeps it)");
    cmd->add_option("--eps", o.eps, "noise level (list sweeps it)");
    cmd->add_option("--seed", o.seeds, "noise seed(s); reconstruction errors average over the list");
    cmd->add_option("--preset", o.preset, "coefficient preset: paper1d or constant");
    cmd->add_option("--precond", o.precond, "preconditioner: none or block-tri")
        ->check(CLI::IsMember({"none", "block-tri", "block_tri"}));
    cmd->add_option("--tol", o.tol, "GMRES relative residual tolerance");
    cmd->add_option("--maxit", o.maxit, "GMRES iteration cap (0 = matrix dimension)");
    cmd->add_option("--mode", o.mode, "sweep measurement: cond, gmres or recon");
    cmd->add_option("--out", o.out, "output path (base path for spectrum)");
    cmd->add_option("--workers", o.workers, "parallel sweep workers");
    cmd->add_option("--dense-cap", o.dense_cap, "dense assembly dimension cap");
}

fracinv::ExperimentConfig build_config(const CliOptions& o) {
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw fracinv::ConfigError("cannot open config file '" + o.config_path + "'");
        try {
            in >> j;
        } catch (const nlohmann::json::exception& ex) {
            throw fracinv::ConfigError("malformed config JSON: " + std::string(ex.what()));
        }
    }
    fracinv::ExperimentConfig cfg = fracinv::config_from_json(j);
    if (o.beta) cfg.beta = *o.beta;
    if (o.omega) cfg.omega = *o.omega;
    if (o.n) cfg.n = *o.n;
    if (o.S) cfg.S = *o.S;
    if (o.lambda) {
        if (o.lambda->empty()) throw fracinv::ConfigError("--lambda needs at least one value");
        cfg.lambda_sweep = *o.lambda;
        cfg.lambda = o.lambda->front();
    }
    if (o.eps) {
        if (o.eps->empty()) throw fracinv::ConfigError("--eps needs at least one value");
        cfg.eps_sweep = *o.eps;
        cfg.eps = o.eps->front();
    }
    if (o.seeds) {
        cfg.seeds = *o.seeds;
        cfg.seed = o.seeds->front();
    }
    if (o.preset) cfg.preset = *o.preset;
    if (o.precond) cfg.use_precond = (*o.precond != "none");
    if (o.tol) cfg.tol = *o.tol;
    if (o.maxit) cfg.maxit = *o.maxit;
    if (o.mode) cfg.mode = *o.mode;
    if (o.out) cfg.out = *o.out;
    if (o.workers) cfg.workers = *o.workers;
    if (o.dense_cap) cfg.dense_cap = *o.dense_cap;
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw fracinv::ConfigError("cannot open output file '" + path + "'");
    out << text;
}

void emit(const fracinv::ExperimentConfig& cfg, const std::string& text) {
    if (cfg.out.empty())
        std::cout << text;
    else
        write_text(cfg.out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix-free solver and experiment harness for the regularized "
                 "inverse source problem of time-space fractional diffusion"};
    app.require_subcommand(1);

    CliOptions opts;
    auto* coeffs = app.add_subcommand("coeffs", "dump fractional-Laplacian symbol coefficients");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the system and preconditioned matrices");
    auto* cond = app.add_subcommand("cond", "2-norm condition numbers over a parameter sweep");
    auto* solve = app.add_subcommand("solve", "run one inverse-problem solve and report");
    auto* sweep = app.add_subcommand("sweep", "tabulate GMRES or reconstruction metrics over a sweep");
    for (auto* cmd : {coeffs, spectrum, cond, solve, sweep}) add_common_options(cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const fracinv::ExperimentConfig cfg = build_config(opts);
        if (coeffs->parsed()) {
            emit(cfg, fracinv::run_coeffs(cfg));
        } else if (spectrum->parsed()) {
            if (cfg.out.empty())
                throw fracinv::ConfigError("spectrum requires --out (base path for the two tables)");
            const auto result = fracinv::run_spectrum(cfg);
            write_text(cfg.out + ".unprec.csv", result.unprec_csv);
            write_text(cfg.out + ".prec.csv", result.prec_csv);
        } else if (cond->parsed()) {
            emit(cfg, fracinv::run_cond(cfg));
        } else if (solve->parsed()) {
            const auto outcome = fracinv::run_solve(cfg);
            std::cout << outcome.report.dump(2) << '\n';
            if (!cfg.out.empty()) write_text(cfg.out, outcome.recon_csv);
            if (!outcome.converged) {
                std::cerr << "gmres did not reach the requested tolerance\n";
                return kExitNoConvergence;
            }
        } else if (sweep->parsed()) {
            emit(cfg, fracinv::run_sweep(cfg));
        }
    } catch (const fracinv::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& ex) {
        std::cerr << "invalid parameter: " << ex.what() << '\n';
        return kExitUsage;
    } catch (const fracinv::ResourceLimitError& ex) {
        std::cerr << "resource limit: " << ex.what() << " (see --dense-cap)\n";
        return kExitUsage;
    } catch (const fracinv::SingularBlockError& ex) {
        std::cerr << "numerical failure: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const fracinv::EigensolverError& ex) {
        std::cerr << "numerical failure: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
