#include "fracinv/symbol.hpp"

#include "fracinv/errors.hpp"
#include "fracinv/fft.hpp"
#include "fracinv/numerics.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fracinv {

SpaceGrid::SpaceGrid(std::vector<int> n_, std::vector<double> lo, std::vector<double> hi)
    : d(static_cast<int>(n_.size())), n(std::move(n_)), box_lo(std::move(lo)), box_hi(std::move(hi)) {
    if (d < 1)
        throw std::domain_error("SpaceGrid requires at least one direction");
    if (box_lo.size() != n.size() || box_hi.size() != n.size())
        throw DimensionError("SpaceGrid: box bounds must match the number of directions");
    for (int i = 0; i < d; ++i) {
        if (n[static_cast<std::size_t>(i)] < 1)
            throw std::domain_error("SpaceGrid requires n_i >= 1");
        if (!(box_hi[static_cast<std::size_t>(i)] > box_lo[static_cast<std::size_t>(i)]))
            throw std::domain_error("SpaceGrid requires box_hi > box_lo in every direction");
    }
    h = (box_hi[0] - box_lo[0]) / (n[0] + 1);
    for (int i = 1; i < d; ++i) {
        const double hi_ = (box_hi[static_cast<std::size_t>(i)] - box_lo[static_cast<std::size_t>(i)]) /
                           (n[static_cast<std::size_t>(i)] + 1);
        if (std::abs(hi_ - h) > 1e-12 * std::abs(h))
            throw std::domain_error("SpaceGrid: mesh width must be common to all directions");
    }
}

std::int64_t SpaceGrid::total() const {
    std::int64_t t = 1;
    for (int ni : n) t *= ni;
    return t;
}

std::vector<std::vector<double>> SpaceGrid::nodes() const {
    const std::int64_t N = total();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(N), std::vector<double>(static_cast<std::size_t>(d)));
    std::vector<int> j(static_cast<std::size_t>(d), 1);
    for (std::int64_t k = 0; k < N; ++k) {
        for (int i = 0; i < d; ++i)
            out[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = node(i, j[static_cast<std::size_t>(i)]);
        // advance the multi-index lexicographically (last direction fastest)
        for (int i = d - 1; i >= 0; --i) {
            if (++j[static_cast<std::size_t>(i)] <= n[static_cast<std::size_t>(i)]) break;
            j[static_cast<std::size_t>(i)] = 1;
        }
    }
    return out;
}

std::int64_t SymbolCoefficients::tensor_size() const {
    std::int64_t t = 1;
    for (int ni : n) t *= 2 * ni - 1;
    return t;
}

double SymbolCoefficients::at(const std::vector<int>& l) const {
    if (static_cast<int>(l.size()) != d)
        throw DimensionError("SymbolCoefficients::at: multi-index has wrong dimension");
    std::int64_t idx = 0;
    for (int i = 0; i < d; ++i) {
        const int ni = n[static_cast<std::size_t>(i)];
        const int li = l[static_cast<std::size_t>(i)];
        if (li <= -ni || li >= ni)
            throw DimensionError("SymbolCoefficients::at: index out of range");
        idx = idx * (2 * ni - 1) + (li + ni - 1);
    }
    return coeffs[static_cast<std::size_t>(idx)];
}

namespace {

void check_omega(double omega) {
    if (!(omega > 0.0 && omega <= 2.0))
        throw std::domain_error("symbol coefficients require omega in (0,2], got " + std::to_string(omega));
}

} // namespace

SymbolCoefficients symbol_coeffs_1d(double omega, int n) {
    check_omega(omega);
    if (n < 1)
        throw std::domain_error("symbol_coeffs_1d requires n >= 1");

    // a_0 from the Gamma closed form, then the exact ratio recursion; the
    // recursion factors lie in (-1,0] so no cancellation accumulates
    std::vector<double> a(static_cast<std::size_t>(n));
    const double g1 = gamma_fn(omega / 2.0 + 1.0);
    a[0] = gamma_fn(omega + 1.0) / (g1 * g1);
    for (int l = 0; l + 1 < n; ++l)
        a[static_cast<std::size_t>(l + 1)] =
            (1.0 - (omega + 1.0) / (omega / 2.0 + l + 1.0)) * a[static_cast<std::size_t>(l)];

    SymbolCoefficients sym;
    sym.omega = omega;
    sym.d = 1;
    sym.n = {n};
    sym.coeffs.resize(static_cast<std::size_t>(2 * n - 1));
    for (int l = -(n - 1); l <= n - 1; ++l)
        sym.coeffs[static_cast<std::size_t>(l + n - 1)] = a[static_cast<std::size_t>(std::abs(l))];
    return sym;
}

SymbolCoefficients symbol_coeffs_md(double omega, const std::vector<int>& n,
                                    std::int64_t sample_cap) {
    check_omega(omega);
    const int d = static_cast<int>(n.size());
    if (d < 1)
        throw std::domain_error("symbol_coeffs_md requires at least one direction");
    for (int ni : n)
        if (ni < 1)
            throw std::domain_error("symbol_coeffs_md requires n_i >= 1");

    // sampling grid: the rectangle rule aliases the slowly decaying symbol
    // coefficients, so the 1D path is oversampled hard enough to keep the
    // error under the closed-form cross-check tolerance of 1e-10
    std::vector<int> M(static_cast<std::size_t>(d));
    std::int64_t total = 1;
    for (int i = 0; i < d; ++i) {
        const int base = (d == 1) ? 131072 : 1024;
        M[static_cast<std::size_t>(i)] = std::max(4 * n[static_cast<std::size_t>(i)], base);
        total *= M[static_cast<std::size_t>(i)];
        if (total > sample_cap)
            throw ResourceLimitError("symbol_coeffs_md: sample tensor of " + std::to_string(total) +
                                     " points exceeds cap " + std::to_string(sample_cap));
    }

    // sample g(theta) on theta_i = 2*pi*k_i/M_i; periodicity makes the grid
    // placement immaterial
    std::vector<std::complex<double>> samples(static_cast<std::size_t>(total));
    const double half_omega = omega / 2.0;
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    constexpr double kPi = 3.14159265358979323846;
    // per-direction lookup of 4 sin^2(theta/2)
    std::vector<std::vector<double>> sin2(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        sin2[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(M[static_cast<std::size_t>(i)]));
        for (int kk = 0; kk < M[static_cast<std::size_t>(i)]; ++kk) {
            const double s = std::sin(kPi * kk / M[static_cast<std::size_t>(i)]);
            sin2[static_cast<std::size_t>(i)][static_cast<std::size_t>(kk)] = 4.0 * s * s;
        }
    }
    for (std::int64_t idx = 0; idx < total; ++idx) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
            acc += sin2[static_cast<std::size_t>(i)][static_cast<std::size_t>(k[static_cast<std::size_t>(i)])];
        samples[static_cast<std::size_t>(idx)] = std::pow(acc, half_omega);
        for (int i = d - 1; i >= 0; --i) {
            if (++k[static_cast<std::size_t>(i)] < M[static_cast<std::size_t>(i)]) break;
            k[static_cast<std::size_t>(i)] = 0;
        }
    }

    fft_nd(samples, M, /*inverse=*/false);

    // a_l ~ X_l / prod(M_i); negative l wrap to M_i - |l_i|
    SymbolCoefficients sym;
    sym.omega = omega;
    sym.d = d;
    sym.n = n;
    sym.coeffs.resize(static_cast<std::size_t>(sym.tensor_size()));
    const double scale = 1.0 / static_cast<double>(total);

    std::vector<int> l(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i)
        l[i] = -(n[i] - 1);
    const std::int64_t out_total = sym.tensor_size();
    for (std::int64_t idx = 0; idx < out_total; ++idx) {
        std::int64_t src = 0;
        for (int i = 0; i < d; ++i) {
            const int Mi = M[static_cast<std::size_t>(i)];
            const int li = l[static_cast<std::size_t>(i)];
            const int ki = li >= 0 ? li : Mi + li;
            src = src * Mi + ki;
        }
        sym.coeffs[static_cast<std::size_t>(idx)] = samples[static_cast<std::size_t>(src)].real() * scale;
        for (int i = d - 1; i >= 0; --i) {
            if (++l[static_cast<std::size_t>(i)] <= n[static_cast<std::size_t>(i)] - 1) break;
            l[static_cast<std::size_t>(i)] = -(n[static_cast<std::size_t>(i)] - 1);
        }
    }
    return sym;
}

} // namespace fracinv
