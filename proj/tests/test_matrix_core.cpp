#include "doctest.h"

#include <cmath>
#include <complex>

#include "asymlab/errors.hpp"
#include "asymlab/matrix_core.hpp"
#include "asymlab/rng.hpp"

using namespace asymlab;

namespace {

ComplexMatrix reconstruct(const HermEigen& eig) {
    const std::size_t n = eig.eigenvalues.size();
    ComplexMatrix lambda(n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = eig.eigenvalues[i];
    return eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
}

// random positive matrix with prescribed eigenvalues (diagonal congruence by
// a random unitary)
ComplexMatrix random_psd_with_spectrum(const std::vector<double>& spectrum, Rng& rng) {
    const ComplexMatrix u = random_unitary(spectrum.size(), rng);
    return (u * ComplexMatrix::diagonal(spectrum) * u.adjoint()).hermitized();
}

} // namespace

TEST_SUITE("matrix_core") {

TEST_CASE("herm_eig on diagonal input returns sorted spectrum") {
    const auto eig = herm_eig(ComplexMatrix::diagonal(std::vector<double>{3.0, 1.0, 2.0}));
    REQUIRE(eig.eigenvalues.size() == 3);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(eig.eigenvalues[2] == doctest::Approx(3.0));
    // permutation eigenvectors: each column is a standard basis vector
    for (std::size_t j = 0; j < 3; ++j) {
        double col_max = 0.0;
        for (std::size_t i = 0; i < 3; ++i) col_max = std::max(col_max, std::abs(eig.eigenvectors(i, j)));
        CHECK(col_max == doctest::Approx(1.0));
    }
}

TEST_CASE("herm_eig of the symmetric swap") {
    const auto a = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const auto eig = herm_eig(a);
    CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("herm_eig of a rank-one perturbation of 2I") {
    const auto a = ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const auto eig = herm_eig(a);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(3.0));
}

TEST_CASE("herm_eig reconstruction and orthonormality residuals") {
    Rng rng(123);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 8));
        ComplexMatrix a = random_ginibre(n, rng).hermitized();
        const auto eig = herm_eig(a);
        const double scale = std::max(a.frobenius_norm(), 1.0);
        CHECK((reconstruct(eig) - a).frobenius_norm() <= 1e-10 * scale);
        const ComplexMatrix gram = eig.eigenvectors.adjoint() * eig.eigenvectors;
        CHECK(max_abs_diff(gram, ComplexMatrix::identity(n)) <= 1e-11);
    }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
    const auto a = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    CHECK_THROWS_AS(herm_eig(a), Error);
}

TEST_CASE("psd square root and inverse square root on diagonals") {
    const auto id = ComplexMatrix::identity(3);
    auto [r, ri] = psd_sqrt_and_invsqrt(id, 1e-12);
    CHECK(max_abs_diff(r, id) <= 1e-12);
    CHECK(max_abs_diff(ri, id) <= 1e-12);

    auto [s, si] = psd_sqrt_and_invsqrt(ComplexMatrix::diagonal(std::vector<double>{4.0, 0.25}), 1e-12);
    CHECK(s(0, 0).real() == doctest::Approx(2.0));
    CHECK(s(1, 1).real() == doctest::Approx(0.5));
    CHECK(si(0, 0).real() == doctest::Approx(0.5));
    CHECK(si(1, 1).real() == doctest::Approx(2.0));

    auto [t, ti] = psd_sqrt_and_invsqrt(ComplexMatrix::diagonal(std::vector<double>{0.9, 0.1}), 1e-12);
    CHECK(t(0, 0).real() == doctest::Approx(std::sqrt(0.9)));
    CHECK(ti(1, 1).real() == doctest::Approx(1.0 / std::sqrt(0.1)));
    CHECK(max_abs_diff(t * ti, ComplexMatrix::identity(2)) <= 1e-12);
}

TEST_CASE("psd_sqrt_and_invsqrt rejects spectra below the floor") {
    const auto a = ComplexMatrix::diagonal(std::vector<double>{1.0, 1e-14});
    CHECK_THROWS_AS(psd_sqrt_and_invsqrt(a, 1e-12), Error);
}

TEST_CASE("psd_sqrt squares back and is spectrally monotone") {
    Rng rng(77);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> spectrum;
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 5));
        for (std::size_t i = 0; i < n; ++i) spectrum.push_back(rng.uniform(0.0, 2.0));
        const ComplexMatrix a = random_psd_with_spectrum(spectrum, rng);
        const ComplexMatrix r = psd_sqrt(a);
        CHECK((r * r - a).frobenius_norm() <= 1e-10 * std::max(1.0, a.frobenius_norm()));
        // eigenvalues of the root are the roots of the eigenvalues
        auto ea = herm_eig(a).eigenvalues;
        auto er = herm_eig(r).eigenvalues;
        for (std::size_t i = 0; i < n; ++i)
            CHECK(er[i] == doctest::Approx(std::sqrt(std::max(ea[i], 0.0))).epsilon(1e-8));
    }
}

TEST_CASE("reduced minimum modulus on worked diagonals") {
    auto g = reduced_min_modulus(ComplexMatrix::diagonal(std::vector<double>{0.0, 0.3, 1.0}), 1e-10);
    CHECK(!g.zero_operator);
    CHECK(g.value == doctest::Approx(0.3));
    CHECK(g.kernel_dim == 1);

    auto gi = reduced_min_modulus(ComplexMatrix::identity(4), 1e-10);
    CHECK(gi.value == doctest::Approx(1.0));
    CHECK(gi.kernel_dim == 0);

    auto gt = reduced_min_modulus(ComplexMatrix::diagonal(std::vector<double>{1e-14, 0.5}), 1e-10);
    CHECK(gt.value == doctest::Approx(0.5));
    CHECK(gt.kernel_dim == 1);
}

TEST_CASE("reduced minimum modulus flags the zero operator") {
    auto g = reduced_min_modulus(ComplexMatrix(3), 1e-10);
    CHECK(g.zero_operator);
    CHECK(std::isinf(g.value));
    CHECK(g.kernel_dim == 3);
}

TEST_CASE("gamma equals the smallest retained eigenvalue for positive matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.integer(0, 5));
        std::vector<double> spectrum;
        double expected = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const bool zero = rng.uniform() < 0.3;
            const double w = zero ? 0.0 : rng.uniform(0.05, 2.0);
            spectrum.push_back(w);
            if (!zero) expected = std::min(expected, w);
        }
        const ComplexMatrix a = random_psd_with_spectrum(spectrum, rng);
        const auto g = reduced_min_modulus(a, 1e-8);
        if (std::isinf(expected)) {
            CHECK(g.zero_operator);
        } else {
            CHECK(g.value == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("spectral subspace selection on a diagonal") {
    const auto a = ComplexMatrix::diagonal(std::vector<double>{0.2, 0.5, 0.9});
    auto mid = spectral_subspace(a, 0.4, 0.8);
    CHECK(mid.k_dim == 1);
    // K spans e2
    CHECK(std::abs(mid.basis(1, 0)) == doctest::Approx(1.0));

    CHECK(spectral_subspace(a, 0.0, 1.0).k_dim == 3);
    CHECK(spectral_subspace(a, 0.95, 1.0).k_dim == 0);
}

TEST_CASE("spectral subspaces of an interval partition tile the space") {
    Rng rng(5);
    std::vector<double> spectrum = {0.05, 0.25, 0.3, 0.61, 0.61, 0.95};
    const ComplexMatrix a = random_psd_with_spectrum(spectrum, rng);
    const double cuts[] = {0.0, 0.3, 0.7, 1.01};
    std::size_t total = 0;
    for (int c = 0; c < 3; ++c) total += spectral_subspace(a, cuts[c], cuts[c + 1]).k_dim;
    CHECK(total == spectrum.size());
}

TEST_CASE("block upper inverse matches the closed form") {
    BlockSplit split{1, ComplexMatrix::identity(2)};
    const auto x = ComplexMatrix::from_rows({{2.0, 1.0}, {0.0, 4.0}});
    const auto inv = block_upper_inverse(x, split, 1e-12);
    CHECK(inv(0, 0).real() == doctest::Approx(0.5));
    CHECK(inv(0, 1).real() == doctest::Approx(-0.125));
    CHECK(std::abs(inv(1, 0)) == doctest::Approx(0.0));
    CHECK(inv(1, 1).real() == doctest::Approx(0.25));

    const auto ident = block_upper_inverse(ComplexMatrix::identity(2), split, 1e-12);
    CHECK(max_abs_diff(ident, ComplexMatrix::identity(2)) <= 1e-13);

    const auto u = ComplexMatrix::from_rows({{1.0, 5.0}, {0.0, 1.0}});
    const auto uinv = block_upper_inverse(u, split, 1e-12);
    CHECK(uinv(0, 1).real() == doctest::Approx(-5.0));
}

TEST_CASE("block upper inverse rejects a populated lower-left block") {
    BlockSplit split{1, ComplexMatrix::identity(2)};
    const auto x = ComplexMatrix::from_rows({{2.0, 1.0}, {0.5, 4.0}});
    CHECK_THROWS_AS(block_upper_inverse(x, split, 1e-12), Error);
}

TEST_CASE("block upper inverse flags singular diagonal blocks") {
    BlockSplit split{1, ComplexMatrix::identity(2)};
    const auto x = ComplexMatrix::from_rows({{2.0, 1.0}, {0.0, 0.0}});
    try {
        block_upper_inverse(x, split, 1e-12);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularBlock);
    }
}

TEST_CASE("block inverse agrees with dense inversion on random splits") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 6));
        const std::size_t k = static_cast<std::size_t>(rng.integer(1, std::max<long>(1, static_cast<long>(n) - 1)));
        const ComplexMatrix basis = random_unitary(n, rng);
        // well-conditioned upper block-triangular content in that basis
        ComplexMatrix y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i >= k && j < k) continue;
                y(i, j) = 0.3 * rng.gaussian_complex();
            }
            y(i, i) += Complex(1.5, 0.0);
        }
        const ComplexMatrix x = basis * y * basis.adjoint();
        BlockSplit split{k, basis};
        const ComplexMatrix via_blocks = block_upper_inverse(x, split, 1e-8);
        const ComplexMatrix direct = invert(x);
        const double cond = cond_estimate(x);
        CHECK((via_blocks - direct).frobenius_norm() <= 1e-10 * cond);
        CHECK((via_blocks * x - ComplexMatrix::identity(n)).frobenius_norm() <= 1e-10 * cond);
    }
}

TEST_CASE("psd_check accepts PSD matrices and rejects indefinite ones") {
    Rng rng(17);
    const ComplexMatrix good = random_psd_with_spectrum({0.0, 0.2, 1.3, 0.7}, rng);
    CHECK(psd_check(good, 1e-10).psd);

    const ComplexMatrix bad = random_psd_with_spectrum({-0.05, 0.2, 1.3}, rng);
    CHECK(!psd_check(bad, 1e-10).psd);
}

TEST_CASE("random unitaries are unitary and matrix_power is consistent") {
    Rng rng(31);
    const ComplexMatrix u = random_unitary(5, rng);
    CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(5)) <= 1e-12);
    const ComplexMatrix u8 = matrix_power(u, 8);
    ComplexMatrix direct = ComplexMatrix::identity(5);
    for (int i = 0; i < 8; ++i) direct = direct * u;
    CHECK(max_abs_diff(u8, direct) <= 1e-12);
}

TEST_CASE("invert reports singular matrices") {
    const auto x = ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    CHECK_THROWS_AS(invert(x), Error);
    CHECK(!is_invertible(x));
    CHECK(is_invertible(ComplexMatrix::identity(3)));
}

} // TEST_SUITE
