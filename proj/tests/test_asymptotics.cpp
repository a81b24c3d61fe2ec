#include "doctest.h"

#include <cmath>
#include <complex>

#include "asymlab/asymptotics.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/matrix_core.hpp"
#include "asymlab/rng.hpp"

using namespace asymlab;

namespace {

const Complex IU(0.0, 1.0);

// T = [[1, i-1],[0, i]] has the closed form T^n = [[1, i^n - 1],[0, i^n]],
// so Q_n = T*^n T^n is 4-periodic.  The almost-convergence value is the
// average of Q_0..Q_3 -- an oracle independent of the iteration code.
ComplexMatrix period4_operator() {
    return ComplexMatrix::from_rows({{1.0, IU - 1.0}, {0.0, IU}});
}

ComplexMatrix period4_power(int n) {
    const Complex in = std::pow(IU, n);
    return ComplexMatrix::from_rows({{1.0, in - 1.0}, {0.0, in}});
}

ComplexMatrix period4_limit_oracle() {
    ComplexMatrix acc(2);
    for (int n = 0; n < 4; ++n) {
        const ComplexMatrix p = period4_power(n);
        acc += p.adjoint() * p;
    }
    acc *= Complex(0.25, 0.0);
    return acc.hermitized();
}

Params fast_params() {
    Params p;
    p.power_budget = 64;
    return p;
}

} // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("power profile of a unitary is flat and bounded") {
    Rng rng(7);
    const ComplexMatrix u = random_unitary(4, rng);
    const auto profile = power_profile(u, 64);
    CHECK(profile.verdict == BoundednessVerdict::PowerBounded);
    for (const auto& [n, norm] : profile.norms) CHECK(norm == doctest::Approx(1.0));
    CHECK(profile.sup_estimate == doctest::Approx(1.0));
}

TEST_CASE("power profile flags the Jordan block at 1") {
    const auto t = ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
    const auto profile = power_profile(t, 64);
    CHECK(profile.verdict == BoundednessVerdict::NotPowerBounded);
}

TEST_CASE("power profile of the period-4 operator is bounded with sup 1 + sqrt(2)") {
    const auto profile = power_profile(period4_operator(), 64);
    CHECK(profile.verdict == BoundednessVerdict::PowerBounded);
    // closed form: ||T^2|| = 1 + sqrt(2) is the largest power norm
    CHECK(profile.sup_estimate == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("power profile overflow is reported with the offending exponent") {
    const auto t = ComplexMatrix::from_rows({{Complex(1e60, 0.0), 0.0}, {0.0, 0.0}});
    const auto profile = power_profile(t, 64);
    CHECK(profile.verdict == BoundednessVerdict::NotPowerBounded);
    CHECK(profile.offending_exponent >= 1);
}

TEST_CASE("contraction limit: unitary gives the identity") {
    Rng rng(11);
    const ComplexMatrix u = random_unitary(5, rng);
    const auto report = asymptotic_limit_contraction(u);
    CHECK(report.converged);
    CHECK(max_abs_diff(report.A, ComplexMatrix::identity(5)) <= 1e-12);
    CHECK(report.kernel_dim == 0);
    CHECK(report.norm_A == doctest::Approx(1.0));
    CHECK(report.monotone_ok);
}

TEST_CASE("contraction limit: diag(1, 0.5) gives diag(1, 0)") {
    const auto report =
        asymptotic_limit_contraction(ComplexMatrix::diagonal(std::vector<double>{1.0, 0.5}));
    CHECK(report.converged);
    CHECK(report.A(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(report.A(1, 1)) <= 1e-9);
    CHECK(report.kernel_dim == 1);
    CHECK(report.gamma == doctest::Approx(1.0));
    CHECK(report.residual <= 1e-9);
}

TEST_CASE("contraction limit: nilpotent shift gives zero") {
    const auto t = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    const auto report = asymptotic_limit_contraction(t);
    CHECK(report.A.max_abs() <= 1e-12);
    CHECK(report.kernel_dim == 2);
    CHECK(report.gamma_zero_operator);
}

TEST_CASE("contraction limit rejects an expansive operator") {
    CHECK_THROWS_AS(
        asymptotic_limit_contraction(ComplexMatrix::diagonal(std::vector<double>{1.5})), Error);
}

TEST_CASE("contraction limit reports budget exhaustion as a flagged partial") {
    Params p;
    p.max_iter = 3;
    const auto t = ComplexMatrix::diagonal(std::vector<double>{0.999});
    const auto report = asymptotic_limit_contraction(t, p);
    CHECK(!report.converged);
    CHECK(report.iterations == 3);
}

TEST_CASE("surrogate agrees with the contraction limit for a contraction") {
    const auto t = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.5});
    const auto direct = asymptotic_limit_contraction(t);
    const auto windowed = l_asymptotic_surrogate(t); // default budget
    CHECK(windowed.mode == LimitMode::AlmostConvergent);
    CHECK(op_norm(windowed.A - direct.A) <= 1e-9);
}

TEST_CASE("surrogate reproduces the period-4 oracle exactly") {
    const ComplexMatrix oracle = period4_limit_oracle();
    // frozen values from the closed form: [[1, -1], [-1, 3]]
    CHECK(oracle(0, 0).real() == doctest::Approx(1.0));
    CHECK(oracle(0, 1).real() == doctest::Approx(-1.0));
    CHECK(std::abs(oracle(0, 1).imag()) <= 1e-15);
    CHECK(oracle(1, 1).real() == doctest::Approx(3.0));

    const auto report = l_asymptotic_surrogate(period4_operator(), fast_params());
    CHECK(report.mode == LimitMode::AlmostConvergent);
    CHECK(max_abs_diff(report.A, oracle) <= 1e-12);
    CHECK(report.min_spec == doctest::Approx(2.0 - std::sqrt(2.0)));
    CHECK(report.norm_A == doctest::Approx(2.0 + std::sqrt(2.0)));
    CHECK(report.norm_floor_ok);
}

TEST_CASE("surrogate on a unitary returns the identity") {
    Rng rng(23);
    const ComplexMatrix u = random_unitary(3, rng);
    const auto report = l_asymptotic_surrogate(u, fast_params());
    CHECK(max_abs_diff(report.A, ComplexMatrix::identity(3)) <= 1e-12);
    CHECK(report.mode == LimitMode::AlmostConvergent);
}

TEST_CASE("surrogate refuses unbounded input") {
    const auto t = ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(l_asymptotic_surrogate(t, fast_params()), Error);
}

TEST_CASE("iterates of period 24 do not align with dyadic windows: Banach-dependent") {
    // Q_n is exactly 24-periodic; no window length is a multiple of 24, so
    // offset means disagree and the honest answer is to refuse a single value
    const double delta = 2.0 * std::numbers::pi / 24.0;
    const ComplexMatrix d = ComplexMatrix::diagonal(
        std::vector<Complex>{Complex(1.0, 0.0), std::polar(1.0, delta)});
    const ComplexMatrix x = ComplexMatrix::from_rows({{1.0, 0.8}, {0.0, 1.0}});
    const ComplexMatrix t = x * d * invert(x);
    const auto report = l_asymptotic_surrogate(t, fast_params());
    CHECK(report.mode == LimitMode::BanachDependent);
    CHECK(report.window_spread > 10.0 * report.params.tol);
}

TEST_CASE("shift invariance holds within the declared residual tolerance") {
    Rng rng(37);
    for (int trial = 0; trial < 4; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 4));
        ComplexMatrix t = random_ginibre(n, rng);
        t *= Complex(0.8 / std::max(op_norm(t), 1e-9), 0.0);
        const auto report = asymptotic_report(t);
        CHECK(report.residual <= report.residual_tol);
    }
    const auto report = l_asymptotic_surrogate(period4_operator(), fast_params());
    CHECK(report.residual <= report.residual_tol);
}

TEST_CASE("orbit identity: windowed means of ||T^n x||^2 match <Ax, x>") {
    const ComplexMatrix t = period4_operator();
    const auto report = l_asymptotic_surrogate(t, fast_params());
    Rng rng(41);
    for (int s = 0; s < 6; ++s) {
        std::vector<Complex> x = {rng.gaussian_complex(), rng.gaussian_complex()};
        const double nx = vec_norm(x);
        for (auto& v : x) v /= nx;

        // window mean of ||T^n x||^2 over one full period set
        double mean = 0.0;
        std::vector<Complex> orbit = x;
        for (int n = 0; n < 64; ++n) {
            mean += std::pow(vec_norm(orbit), 2.0);
            orbit = t.apply(orbit);
        }
        mean /= 64.0;
        const double quad = vec_dot(x, report.A.apply(x)).real();
        CHECK(mean == doctest::Approx(quad).epsilon(1e-9));

        // <A T x, T x> = <A x, x>
        const auto tx = t.apply(x);
        const double quad_shifted = vec_dot(tx, report.A.apply(tx)).real();
        CHECK(quad_shifted == doctest::Approx(quad).epsilon(1e-9));
    }
}

TEST_CASE("norm floor: a nonzero asymptotic limit has norm at least 1") {
    Rng rng(53);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 4));
        // unitary block plus a strictly stable block: nonzero limit
        const std::size_t k = 1 + static_cast<std::size_t>(rng.integer(0, static_cast<long>(n) - 1));
        const ComplexMatrix v = random_unitary(n, rng);
        ComplexMatrix core(n);
        const ComplexMatrix u = random_unitary(k, rng);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) core(i, j) = u(i, j);
        for (std::size_t i = k; i < n; ++i) core(i, i) = 0.4 * rng.uniform();
        const ComplexMatrix t = v * core * v.adjoint();
        const auto report = asymptotic_report(t);
        CHECK(report.nonzero());
        CHECK(report.norm_floor_ok);
        CHECK(report.norm_A >= 1.0 - 1e-6);
    }
}

TEST_CASE("stable subspace of diag(1, 0.5) is span(e2) and validates by orbit decay") {
    const auto t = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.5});
    const auto report = asymptotic_limit_contraction(t);
    const auto split = stable_subspace(t, report);
    REQUIRE(split.k_dim == 1);
    CHECK(std::abs(split.basis(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("stable subspace of a unitary is trivial; of a nilpotent, everything") {
    Rng rng(61);
    const ComplexMatrix u = random_unitary(3, rng);
    CHECK(stable_subspace(u, asymptotic_limit_contraction(u)).k_dim == 0);

    const auto nil = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    CHECK(stable_subspace(nil, asymptotic_limit_contraction(nil)).k_dim == 2);
}

TEST_CASE("stable subspace validation catches a kernel that does not decay") {
    // hand the validator a wrong report: kernel claims e1 but T fixes e1
    AsymptoticReport fake;
    fake.A = ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0});
    fake.kernel_tol = 1e-10;
    fake.mode = LimitMode::MonotoneContraction;
    const ComplexMatrix t = ComplexMatrix::identity(2);
    CHECK_THROWS_AS(stable_subspace(t, fake), Error);
}

TEST_CASE("Kerchy split of a block-diagonal contraction") {
    const auto t = ComplexMatrix::diagonal(std::vector<double>{0.5, 1.0});
    const auto split = kerchy_decompose(t, asymptotic_limit_contraction(t));
    REQUIRE(split.k_dim == 1);
    CHECK(split.t00(0, 0).real() == doctest::Approx(0.5));
    CHECK(split.t11(0, 0).real() == doctest::Approx(1.0));
    CHECK(split.coupling_norm <= 1e-12);
    CHECK(split.lower_left_norm <= 1e-12);
    CHECK(split.c0_block_ok);
    CHECK(split.c1_block_ok);
}

TEST_CASE("Kerchy split of an upper-triangular power-bounded operator") {
    // H0 = span(e1), T0 = [0.5], coupling R = [1], T1 = [1]
    const auto t = ComplexMatrix::from_rows({{0.5, 1.0}, {0.0, 1.0}});
    const auto report = l_asymptotic_surrogate(t); // default budget: transient washes out
    const auto split = kerchy_decompose(t, report);
    REQUIRE(split.k_dim == 1);
    CHECK(std::abs(split.t00(0, 0)) == doctest::Approx(0.5));
    CHECK(std::abs(split.t11(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(split.in_split_basis(0, 1)) == doctest::Approx(1.0));
    CHECK(split.lower_left_norm <= 1e-10);
}

TEST_CASE("Kerchy split of a unitary has trivial stable block") {
    Rng rng(71);
    const ComplexMatrix u = random_unitary(4, rng);
    const auto split = kerchy_decompose(u, asymptotic_limit_contraction(u));
    CHECK(split.k_dim == 0);
    CHECK(max_abs_diff(split.t11, split.in_split_basis) <= 1e-12);
}

TEST_CASE("Kerchy split raises InvarianceViolation for a non-invariant candidate") {
    const auto t = ComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
    BlockSplit split{1, ComplexMatrix::identity(2)}; // claims K = span(e1); T e1 = e2
    try {
        kerchy_decompose_with_split(t, split);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvarianceViolation);
    }
}

TEST_CASE("C classification on worked examples") {
    Params p = fast_params();
    CHECK(classify_C(ComplexMatrix::diagonal(std::vector<double>{0.5, 0.3}), p) == CClass::C00);
    Rng rng(83);
    CHECK(classify_C(random_unitary(3, rng), p) == CClass::C11);
    CHECK(classify_C(ComplexMatrix::diagonal(std::vector<double>{1.0, 0.5}), p) == CClass::Mixed);
}

TEST_CASE("unitary conjugation covariance of the asymptotic limit") {
    Params p = fast_params();
    const auto t = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.5});
    CHECK(unitary_conjugation_check(t, ComplexMatrix::identity(2), p) <= 1e-12);

    const auto swap = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(unitary_conjugation_check(t, swap, p) <= p.tol);

    Rng rng(97);
    const ComplexMatrix u = random_unitary(2, rng);
    CHECK(unitary_conjugation_check(period4_operator(), u, p) <= 10.0 * p.tol);
}

TEST_CASE("unitary conjugation check rejects a non-unitary conjugator") {
    const auto t = ComplexMatrix::identity(2);
    const auto x = ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(unitary_conjugation_check(t, x), Error);
}

TEST_CASE("monotonicity margin is tracked at every accepted step") {
    Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix t = random_ginibre(4, rng);
        t *= Complex(rng.uniform(0.2, 0.95) / std::max(op_norm(t), 1e-12), 0.0);
        const auto report = asymptotic_limit_contraction(t);
        CHECK(report.monotone_ok);
        CHECK(report.monotone_margin >= -report.params.eig_tol * 10.0);
    }
}

TEST_CASE("params validation raises ToleranceConflict") {
    Params p;
    p.kernel_tol_rel = 1e-6; // far coarser than the eigensolver
    CHECK_THROWS_AS(p.validate(), Error);
}

} // TEST_SUITE
