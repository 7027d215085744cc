#pragma once

#include <vector>

namespace fracinv {

/// Pair of fractional orders: beta for the time derivative, omega for the
/// spatial operator. Validated on construction.
struct FractionalOrders {
    double beta;   ///< time order, in (0,1)
    double omega;  ///< space order, in (1,2)

    FractionalOrders(double beta_, double omega_);
};

/// Uniform time grid on [0,T] with S steps, plus the scheme coefficient
/// eta = dt^beta * Gamma(2-beta) that scales the spatial term.
struct TimeGrid {
    int S;
    double T;
    double dt;
    double eta;
};

/// L1 weight sequences. b[m] = (m+1)^{1-beta} - m^{1-beta}; e[0] = b[0] and
/// e[m] = b[m] - b[m-1] for m >= 1. b is positive strictly decreasing, so
/// e[m] < 0 for m >= 1, and partial sums of e telescope back to b.
struct L1Weights {
    std::vector<double> b;
    std::vector<double> e;
};

/// Gamma function for x > 0, Lanczos rational approximation
/// (near machine accuracy on (0,50)). Throws std::domain_error for x <= 0.
double gamma_fn(double x);

/// L1 weights for order beta in (0,1) and S >= 1 time steps.
L1Weights l1_weights(double beta, int S);

/// Time grid for S >= 1 steps on [0,T], T > 0, with beta in (0,1).
TimeGrid time_grid(double beta, int S, double T);

} // namespace fracinv
