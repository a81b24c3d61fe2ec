#pragma once

#include <map>
#include <optional>
#include <string>

#include "asymlab/asymptotics.hpp"
#include "asymlab/complex_matrix.hpp"

namespace asymlab {

enum class VerdictKind { SimilarToUnitary, SimilarToIsometry, NotSimilarToIsometry, Inconclusive };

const char* to_string(VerdictKind kind);

// V X+ = X+ T with an isometry V on (ker A)^perp.  X+ maps the whole space
// into eigencoordinates of the retained spectrum (rank x dim), V acts on the
// coordinates (rank x rank).  When A is invertible, basis * V * basis^adj
// equals A^{1/2} T A^{-1/2}.
struct IntertwinerCertificate {
    ComplexMatrix xplus;        // rank rows live in the leading block
    ComplexMatrix v;            // rank x rank
    ComplexMatrix range_basis;  // eigenvectors spanning (ker A)^perp, columns 0..rank-1
    std::size_t rank = 0;
    double isometry_defect = 0.0;   // ||V*V - I|| on the retained coordinates
    double intertwine_residual = 0.0; // ||V X+ - X+ T||
};

struct SimilarityVerdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::optional<double> certificate_c;                 // lower bound, c^2 <= gamma(A)
    std::optional<IntertwinerCertificate> intertwiner;
    std::map<std::string, double> evidence;
    std::map<std::string, std::string> notes;
};

// Unitary-similarity test with two independent routes that must agree:
//   (ii)  the limits of T and T* are positive definite (checked on every
//         window mean, so the decision does not hinge on window dispersion);
//   (iii) T is invertible and T, T^-1 are both power bounded.
// Agreement on yes gives SimilarToUnitary; agreement on no falls through to
// the isometry test; numerical disagreement stays Inconclusive with both
// evidence trails attached.
SimilarityVerdict sznagy_unitary_test(const ComplexMatrix& t, const Params& params = {});

// SimilarToIsometry iff the asymptotic limit is positive definite, with
// certificate c = gamma(A)^{1/2} and a sampled lower-bound cross-check on
// ||T^n x||.  For a contraction the sampled floor is c itself; for a general
// power-bounded T the provable uniform floor is sqrt(gamma / ||A||).
SimilarityVerdict sznagy_isometry_test(const ComplexMatrix& t, const Params& params = {});

// The three equivalent characterisations of gamma(A) > 0 for T not of class
// C0., evaluated independently and checked for agreement:
//   (i)   gamma of the limit exceeds the kernel threshold,
//   (ii)  the compression of T to H0^perp is similar to an isometry,
//   (iii) sampled orbits on H0^perp stay above the uniform floor.
struct GammaAlternative {
    bool condition_i = false;
    bool condition_ii = false;
    bool condition_iii = false;
    bool agree = false;
    double gamma = 0.0;
    double isometry_certificate = 0.0; // c from route (ii)
    double sampled_floor = 0.0;        // smallest sampled ||T^n x|| on H0perp
    double theoretical_floor = 0.0;    // sqrt(gamma / ||A||)
    std::map<std::string, double> evidence;
};

GammaAlternative gamma_alternative_test(const ComplexMatrix& t, const Params& params = {});

// Builds V from V A^{1/2} x = A^{1/2} T x on (ker A)^perp.  IllConditioned
// when the retained spectrum dips below floor_gamma.
IntertwinerCertificate intertwiner_to_isometry(const ComplexMatrix& t, const ComplexMatrix& a,
                                               const Params& params = {},
                                               double floor_gamma = 1e-12);

// For S = X T X^-1: the sign of gamma and the stable-subspace dimension are
// similarity invariants; both are computed independently for T and S.
struct InvarianceEvidence {
    double gamma_t = 0.0, gamma_s = 0.0;
    std::size_t kernel_dim_t = 0, kernel_dim_s = 0;
    bool gamma_positive_agree = false;
    bool kernel_dims_equal = false;
    double cond_x = 0.0;
};

InvarianceEvidence similarity_invariance_check(const ComplexMatrix& t, const ComplexMatrix& x,
                                               const Params& params = {});

// ||Tx||^2 <= (||T^2 x||^2 + ||x||^2) / 2 for all x, decided exactly through
// the quadratic form (T*^2 T^2 + I)/2 - T*T >= 0.
struct ClassQResult {
    bool is_class_q = false;
    double min_eig = 0.0;
    std::vector<Complex> witness; // minimizing direction when the test fails
};

ClassQResult class_q_predicate(const ComplexMatrix& t, double eig_tol = defaults::eig_tol);

// Sampled check of ||Tx||^2 <= ||T^2 x|| ||x||.  Pass is evidence, not proof;
// the sample set contains the standard basis, seeded random vectors, and the
// minimizer of the class-Q form (any class-Q violation yields a paranormal
// witness, so the guided vector removes the matching false-pass mode).
struct ParanormalResult {
    bool passed = true;
    std::vector<Complex> witness;
    double worst_margin = 0.0; // max of ||Tx||^2 - ||T^2x|| ||x|| over samples
};

ParanormalResult paranormal_sampled_predicate(const ComplexMatrix& t, int samples,
                                              std::uint64_t seed);

} // namespace asymlab
