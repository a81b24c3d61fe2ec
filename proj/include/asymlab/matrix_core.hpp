#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "asymlab/complex_matrix.hpp"
#include "asymlab/rng.hpp"

namespace asymlab {

namespace defaults {
inline constexpr double eig_tol = 1e-12;
inline constexpr double kernel_tol_rel = 1e-10;
} // namespace defaults

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues with an
// orthonormal column basis, A = V diag(w) V*.
struct HermEigen {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

// Cyclic complex Jacobi rotations, deterministic sweep order.  Converged when
// the off-diagonal Frobenius mass drops below eig_tol * ||A||_F.
HermEigen herm_eig(const ComplexMatrix& a, double eig_tol = defaults::eig_tol);

// spectral norm via the Hermitian spectrum of A*A
double op_norm(const ComplexMatrix& a, double eig_tol = defaults::eig_tol);

std::vector<double> singular_values(const ComplexMatrix& a, double eig_tol = defaults::eig_tol);

// positive square root; eigenvalues in [-clamp, 0) are treated as 0
ComplexMatrix psd_sqrt(const ComplexMatrix& a, double eig_tol = defaults::eig_tol);

// (A^{1/2}, A^{-1/2}); the inverse branch requires min eigenvalue >= floor
std::pair<ComplexMatrix, ComplexMatrix>
psd_sqrt_and_invsqrt(const ComplexMatrix& a, double floor, double eig_tol = defaults::eig_tol);

// gamma(A) = inf ||Ax|| over unit x orthogonal to ker A = smallest singular
// value above kernel_tol.  A numerically zero operator is flagged instead of
// raising; its value field holds +infinity by convention.
struct GammaResult {
    double value = std::numeric_limits<double>::infinity();
    bool zero_operator = false;
    std::size_t kernel_dim = 0;
    double kernel_tol = 0.0;
};

GammaResult reduced_min_modulus(const ComplexMatrix& a, double kernel_tol,
                                double eig_tol = defaults::eig_tol);

inline double default_kernel_tol(const ComplexMatrix& a) {
    return defaults::kernel_tol_rel * op_norm(a);
}

// Orthogonal decomposition H = K + K^perp.  The basis holds orthonormal
// columns spanning K first, then the complement.
struct BlockSplit {
    std::size_t k_dim = 0;
    ComplexMatrix basis;
};

// K = span of eigenvectors of a Hermitian A with eigenvalue in [lo, hi).
// Half-open on the right so interval partitions tile without overlap.
BlockSplit spectral_subspace(const ComplexMatrix& a, double lo, double hi,
                             double eig_tol = defaults::eig_tol);

// K = numerical kernel of a positive A (eigenvalues <= kernel_tol)
BlockSplit kernel_split(const ComplexMatrix& a, double kernel_tol,
                        double eig_tol = defaults::eig_tol);

// Inverse of an invertible X that is upper block-triangular in the split's
// basis, assembled from the block formula
//   [[X11^-1, -X11^-1 X12 X22^-1], [0, X22^-1]].
ComplexMatrix block_upper_inverse(const ComplexMatrix& x, const BlockSplit& split, double tol);

// dense LU inverse with partial pivoting; throws SingularBlock on breakdown
ComplexMatrix invert(const ComplexMatrix& x);
bool is_invertible(const ComplexMatrix& x, double rel_pivot_tol = 1e-13);
double cond_estimate(const ComplexMatrix& x, double eig_tol = defaults::eig_tol);

// positive-semidefiniteness test via diagonally pivoted Cholesky; cheap
// enough to run at every iteration step.  min_diag reports the most negative
// pivot candidate encountered (0 when none).
struct PsdCheckResult {
    bool psd = true;
    double min_diag = 0.0;
};
PsdCheckResult psd_check(const ComplexMatrix& h, double tol);

// modified Gram-Schmidt; columns below drop_tol are dropped
ComplexMatrix orthonormalize_columns(const std::vector<std::vector<Complex>>& cols,
                                     std::size_t dim, double drop_tol = 1e-12);

// extend k orthonormal columns to a full orthonormal basis of C^dim
ComplexMatrix complete_basis(const std::vector<std::vector<Complex>>& k_cols, std::size_t dim);

// Haar-ish random unitary: QR of a Ginibre matrix with phase-fixed diagonal
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

// T^n by repeated squaring
ComplexMatrix matrix_power(const ComplexMatrix& t, unsigned long long n);

} // namespace asymlab
