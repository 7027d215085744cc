#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracinv/errors.hpp"
#include "fracinv/spectra.hpp"
#include "fracinv/system.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <stdexcept>

using namespace fracinv;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("sample_fields evaluates the paper1d preset at the documented points") {
    // n=15 puts x = pi/2 at node index 7; S=4 puts t=1 at s=4
    const auto spec = testutil::paper_problem(0.5, 1.5, 15, 4);
    const auto diags = sample_fields(spec);
    CHECK(diags.D1(3, 7) == doctest::Approx(std::exp(kPi / 2.0)).epsilon(1e-14));
    CHECK(diags.D1(3, 7) == doctest::Approx(4.8104773809653516).epsilon(1e-12));
    // gamma2 = t^2 x at t=0.5 (s=2 of 4), x = pi/2
    CHECK(diags.D2(1, 7) == doctest::Approx(0.25 * kPi / 2.0).epsilon(1e-14));
}

TEST_CASE("sample_fields on a grid containing x=1 exactly") {
    // box (0,2), n=3 -> h=0.5, nodes {0.5, 1.0, 1.5}; t_1 = 0.5 for S=2
    SpaceGrid grid({3}, {0.0}, {2.0});
    auto spec = make_custom_problem(
        FractionalOrders(0.5, 1.5), grid, 2, 1.0,
        [](const std::vector<double>& x, double t) { return t * std::exp(x[0]); },
        [](const std::vector<double>& x, double t) { return t * t * x[0]; },
        [](double t) { return t * t; }, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), 1e-2, 0.0);
    const auto diags = sample_fields(spec);
    CHECK(diags.D2(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("sample_fields constant preset gives all-ones diagonals") {
    const auto spec = make_problem("constant", 0.5, 1.5, {6}, 3, 1e-2, 0.0);
    const auto diags = sample_fields(spec);
    CHECK(diags.D1.minCoeff() == 1.0);
    CHECK(diags.D1.maxCoeff() == 1.0);
    CHECK(diags.D2.minCoeff() == 1.0);
    CHECK(diags.D2.maxCoeff() == 1.0);
}

TEST_CASE("apply_system maps zero to zero and is linear") {
    const SystemOperator A(testutil::paper_problem(0.5, 1.5, 8, 4));
    CHECK(A.apply(Eigen::VectorXd::Zero(A.dim())).norm() == 0.0);

    testutil::RandomVectors rng(5);
    const Eigen::VectorXd y1 = rng.vector(A.dim()), y2 = rng.vector(A.dim());
    const double alpha = 0.37;
    const Eigen::VectorXd lhs = A.apply(alpha * y1 + y2);
    const Eigen::VectorXd rhs = alpha * A.apply(y1) + A.apply(y2);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("apply_system scalar reduction at S=1, n=1") {
    SpaceGrid grid({1}, {0.0}, {2.0});  // h = 1
    auto spec = make_custom_problem(
        FractionalOrders(0.5, 1.5), grid, 1, 1.0,
        [](const std::vector<double>&, double) { return 1.0; },
        [](const std::vector<double>&, double) { return 1.0; },
        [](double) { return 1.0; }, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), 7e-3, 0.0);
    const SystemOperator A(spec);
    const double a0 = A.laplacian().symbol().at(0);
    const double eta = A.spec().tgrid.eta;

    Eigen::VectorXd y(2);
    y << 1.25, -0.5;
    const Eigen::VectorXd z = A.apply(y);
    // e_0 = 1, h = 1: z1 = (1 + eta*a0) y1 - eta*q*y2 ; z2 = y1 + lambda*a0*y2
    CHECK(z[0] == doctest::Approx((1.0 + eta * a0) * y[0] - eta * 1.0 * y[1]).epsilon(1e-14));
    CHECK(z[1] == doctest::Approx(y[0] + 7e-3 * a0 * y[1]).epsilon(1e-14));
}

TEST_CASE("apply_system agrees with the dense assembly across orders and dimensions") {
    for (auto [beta, omega] : {std::pair{0.1, 1.9}, {0.5, 1.5}, {0.9, 1.1}}) {
        const SystemOperator A1(testutil::paper_problem(beta, omega, 32, 16));
        const Eigen::MatrixXd M1 = assemble_dense_system(A1, DenseKind::SystemA).matrix;
        testutil::RandomVectors rng(17);
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::VectorXd y = rng.vector(A1.dim());
            const Eigen::VectorXd ref = M1 * y;
            CHECK((A1.apply(y) - ref).norm() <= 1e-12 * ref.norm());
        }

        const SystemOperator A2(testutil::test_problem_2d(beta, omega, {4, 3}, 8));
        const Eigen::MatrixXd M2 = assemble_dense_system(A2, DenseKind::SystemA).matrix;
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::VectorXd y = rng.vector(A2.dim());
            const Eigen::VectorXd ref = M2 * y;
            CHECK((A2.apply(y) - ref).norm() <= 1e-12 * ref.norm());
        }
    }
}

TEST_CASE("apply_system rejects wrong lengths") {
    const SystemOperator A(testutil::paper_problem(0.5, 1.5, 4, 2));
    CHECK_THROWS_AS(A.apply(Eigen::VectorXd::Zero(A.dim() + 1)), DimensionError);
}

TEST_CASE("build_rhs with zero initial condition is zero except the data block") {
    const SystemOperator A(testutil::paper_problem(0.1, 1.9, 6, 3));
    testutil::RandomVectors rng(9);
    const Eigen::VectorXd mu = rng.vector(6);
    const RhsVector rhs = build_rhs(A, mu);
    CHECK(rhs.z.head(A.dim() - 6).norm() == 0.0);
    CHECK((rhs.z.tail(6).array() == mu.array()).all());
}

TEST_CASE("build_rhs carries b_{s-1} D1 rho in the time blocks") {
    SpaceGrid grid({3}, {0.0}, {kPi});
    auto spec = make_custom_problem(
        FractionalOrders(0.5, 1.5), grid, 2, 1.0,
        [](const std::vector<double>&, double) { return 1.0; },
        [](const std::vector<double>&, double) { return 1.0; },
        [](double) { return 1.0; }, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3), 1e-2, 0.0);
    const SystemOperator A(spec);
    const Eigen::VectorXd mu = Eigen::VectorXd::Constant(3, 2.5);
    const RhsVector rhs = build_rhs(A, mu);
    const auto& b = A.weights().b;
    for (int j = 0; j < 3; ++j) {
        CHECK(rhs.z[j] == doctest::Approx(b[0]).epsilon(1e-15));
        CHECK(rhs.z[3 + j] == doctest::Approx(b[1]).epsilon(1e-15));
        CHECK(rhs.z[6 + j] == 2.5);
    }
    CHECK_THROWS_AS(build_rhs(A, Eigen::VectorXd::Zero(4)), DimensionError);
}

TEST_CASE("forward_solve of the homogeneous problem is identically zero") {
    auto spec = testutil::paper_problem(0.5, 1.5, 8, 4);
    spec.f_true.setZero();  // rho is already zero
    const SystemOperator A(spec);
    const auto sol = forward_solve(A);
    CHECK(sol.mu.norm() == 0.0);
    for (const auto& v : sol.states) CHECK(v.norm() == 0.0);
}

TEST_CASE("forward_solve satisfies the dense forward system") {
    for (auto [n, S] : {std::pair{4, 2}, {8, 4}}) {
        const SystemOperator A(testutil::paper_problem(0.1, 1.9, n, S));
        const auto sol = forward_solve(A);
        const Eigen::MatrixXd Ahat = assemble_dense_system(A, DenseKind::ForwardAhat).matrix;

        Eigen::VectorXd v(static_cast<Eigen::Index>(S) * n), zhat(static_cast<Eigen::Index>(S) * n);
        for (int s = 1; s <= S; ++s) {
            v.segment(static_cast<Eigen::Index>(s - 1) * n, n) = sol.states[static_cast<std::size_t>(s - 1)];
            zhat.segment(static_cast<Eigen::Index>(s - 1) * n, n) =
                A.spec().tgrid.eta * A.q_values()[static_cast<std::size_t>(s - 1)] * A.spec().f_true;
        }
        CHECK((Ahat * v - zhat).norm() <= 1e-12 * zhat.norm());

        // independent route: dense solve of the full forward system
        const Eigen::VectorXd vref = Ahat.partialPivLu().solve(zhat);
        CHECK((v - vref).norm() <= 1e-10 * vref.norm());
        CHECK((sol.mu - vref.tail(n)).norm() <= 1e-10 * vref.tail(n).norm());
    }
}

TEST_CASE("forward_solve reports a singular diagonal block with its time index") {
    SpaceGrid grid({4}, {0.0}, {kPi});
    // gamma1 = 0 and gamma2 vanishing at t_1 make the first block zero
    auto spec = make_custom_problem(
        FractionalOrders(0.5, 1.5), grid, 2, 1.0,
        [](const std::vector<double>&, double) { return 0.0; },
        [](const std::vector<double>&, double t) { return t - 0.5; },
        [](double) { return 1.0; }, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Ones(4), 1e-2, 0.0);
    const SystemOperator A(spec);
    CHECK_THROWS_AS(forward_solve(A), SingularBlockError);
    try {
        forward_solve(A);
    } catch (const SingularBlockError& ex) {
        CHECK(ex.time_index() == 1);
    }
}

TEST_CASE("add_noise is deterministic, seed-split and exact at eps=0") {
    testutil::RandomVectors rng(23);
    const Eigen::VectorXd mu = rng.vector(32);
    CHECK((add_noise(mu, 0.0, 7) - mu).norm() == 0.0);
    const Eigen::VectorXd a = add_noise(mu, 0.01, 1), b = add_noise(mu, 0.01, 1);
    CHECK((a - b).norm() == 0.0);
    const Eigen::VectorXd c = add_noise(mu, 0.01, 2);
    CHECK((a - c).norm() > 0.0);
    CHECK_THROWS_AS(add_noise(mu, -0.1, 1), std::domain_error);
    // every sample stays inside the open noise band
    for (int j = 0; j < 32; ++j) CHECK(std::abs(a[j] - mu[j]) < 0.01);
}

TEST_CASE("add_noise second moment matches the uniform distribution") {
    // E||mu_eps - mu||_2 ~ eps * sqrt(n/3) for uniform (-1,1) perturbations
    const int n = 256;
    const double eps = 0.1;
    const Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        mean += add_noise(mu, eps, seed).norm();
    mean /= 100.0;
    const double expected = eps * std::sqrt(n / 3.0);
    CHECK(mean >= 0.8 * expected);
    CHECK(mean <= 1.2 * expected);
}

TEST_CASE("extract_reconstruction slices the trailing block") {
    Eigen::VectorXd y(9);
    y << 9, 8, 7, 6, 5, 4, 1, 2, 3;
    const Eigen::VectorXd f = extract_reconstruction(y, 3);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == 2.0);
    CHECK(f[2] == 3.0);
    CHECK_THROWS_AS(extract_reconstruction(y, 4), DimensionError);
    CHECK(relative_error(f, f) == 0.0);
}

TEST_CASE("inverse-crime consistency: zero noise and tiny lambda recover the source") {
    const SystemOperator A(testutil::paper_problem(0.1, 1.9, 32, 32, 1e-8, 0.0));
    const auto mu = forward_solve(A).mu;
    const RhsVector rhs = build_rhs(A, mu);
    const Eigen::MatrixXd M = assemble_dense_system(A, DenseKind::SystemA).matrix;
    const Eigen::VectorXd y = M.partialPivLu().solve(rhs.z);
    const double err = relative_error(A.spec().f_true, extract_reconstruction(y, 32));
    CHECK(err <= 1e-3);
}

TEST_CASE("nonpositive q is rejected at operator construction") {
    SpaceGrid grid({4}, {0.0}, {kPi});
    auto spec = make_custom_problem(
        FractionalOrders(0.5, 1.5), grid, 2, 1.0,
        [](const std::vector<double>&, double) { return 1.0; },
        [](const std::vector<double>&, double) { return 1.0; },
        [](double t) { return t - 0.5; },  // q(t_1) = 0
        Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4), 1e-2, 0.0);
    CHECK_THROWS_AS(SystemOperator{spec}, std::domain_error);
}

TEST_CASE("make_problem validates preset names and dimensions") {
    CHECK_THROWS_AS(make_problem("nope", 0.5, 1.5, {8}, 4, 1e-2, 0.0), ConfigError);
    CHECK_THROWS_AS(make_problem("paper1d", 0.5, 1.5, {4, 4}, 4, 1e-2, 0.0), ConfigError);
    CHECK_NOTHROW(make_problem("constant", 0.5, 1.5, {4, 4}, 4, 1e-2, 0.0));
    CHECK_THROWS_AS(make_problem("paper1d", 0.5, 1.5, {8}, 4, 0.0, 0.0), std::domain_error);
}
