#pragma once

#include "fracinv/krylov.hpp"
#include "fracinv/spectra.hpp"
#include "fracinv/system.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fracinv {

/// One experiment description, fed by CLI flags and/or a JSON config file.
///
/// The `n` field is interpreted per command: `coeffs`, `spectrum` and `solve`
/// read it as per-direction grid extents of a single run (one value per
/// dimension), while the sweep-style commands `cond` and `sweep` read it as a
/// list of one-dimensional grid sizes to sweep over, matching the layout of
/// the reported tables.
struct ExperimentConfig {
    std::string preset = "paper1d";
    double beta = 0.1;
    double omega = 1.9;
    std::vector<std::pair<double, double>> orders;  ///< (beta, omega) sweep pairs
    std::vector<int> n = {16};
    std::vector<int> S = {16};
    double lambda = 5e-3;
    std::vector<double> lambda_sweep;
    double eps = 0.01;
    std::vector<double> eps_sweep;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;  ///< reconstruction errors are averaged over these
    bool use_precond = true;
    double tol = 1e-8;
    int maxit = 0;  ///< 0 selects the matrix dimension
    std::string mode;  ///< sweep measurement: "cond", "gmres" or "recon"
    std::string out;
    int workers = 1;
    std::int64_t dense_cap = 4096;
};

/// Reads every recognized key of `j` into a config; unknown keys are
/// rejected. Throws ConfigError on malformed input.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Effective single-run configuration echo for solve reports.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// `coeffs`: symbol coefficient dump, columns `l,a_l` (1D) or `l1,l2,a_l` (2D).
std::string run_coeffs(const ExperimentConfig& cfg);

/// `spectrum`: eigenvalues of A and of P^{-1}A as `re,im` tables.
struct SpectrumOutput {
    std::string unprec_csv;
    std::string prec_csv;
};
SpectrumOutput run_spectrum(const ExperimentConfig& cfg);

/// `cond`: condition-number table over (beta,omega) x n x S x lambda.
std::string run_cond(const ExperimentConfig& cfg);

/// `solve`: full pipeline for one configuration; JSON report plus an optional
/// reconstruction table `x,f_true,f_recon`.
struct SolveOutcome {
    nlohmann::json report;
    std::string recon_csv;
    bool converged = false;
};
SolveOutcome run_solve(const ExperimentConfig& cfg);

/// `sweep`: one row per parameter combination; measurement set chosen by
/// cfg.mode. Rows run in parallel across cfg.workers threads and are emitted
/// in input order; per-row failures land in the `error` column.
std::string run_sweep(const ExperimentConfig& cfg);

/// Shortest-form float formatting with 17 significant digits (round-trip
/// exact, '.' decimal point).
std::string format_double(double v);

} // namespace fracinv
