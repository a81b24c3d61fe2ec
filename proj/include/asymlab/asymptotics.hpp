#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asymlab/complex_matrix.hpp"
#include "asymlab/matrix_core.hpp"

namespace asymlab {

// Shared tolerance / budget bundle.  Every report echoes the bundle it was
// produced with, so results carry their provenance.
struct Params {
    double tol = 1e-10;             // iteration stop & window agreement tolerance
    double eig_tol = 1e-12;         // eigensolver relative tolerance
    double kernel_tol_rel = 1e-10;  // kernel threshold relative to max(||A||, 1)
    int power_budget = 4096;        // surrogate iterate budget N
    int max_iter = 100000;          // contraction iteration cap
    int decay_budget = 32;          // orbit power used to validate stable vectors
    double decay_threshold = 1e-6;  // ||T^decay_budget x|| bound for stable x
    int sample_count = 32;          // random probes for sampled checks
    std::uint64_t seed = 0x5eed0001ULL;
    double op_norm_slack = 1e-10;   // rounding slack on ||T|| <= 1

    void validate() const; // throws ToleranceConflict / InvalidArgument

    double kernel_tol_for(double norm_a) const {
        return kernel_tol_rel * (norm_a > 1.0 ? norm_a : 1.0);
    }
};

enum class BoundednessVerdict { PowerBounded, NotPowerBounded, Inconclusive };

const char* to_string(BoundednessVerdict v);

// ||T^n|| along n = 1..N: direct products up to n = 64, repeated squaring
// beyond.  The verdict is an explicit heuristic: divergence is declared when
// a norm exceeds 1e6 * ||T|| or four consecutive doublings each grow by a
// factor >= 1.5; growth at budget exhaustion stays Inconclusive.
struct PowerProfile {
    std::vector<std::pair<long long, double>> norms; // (exponent, ||T^n||)
    double sup_estimate = 0.0;
    BoundednessVerdict verdict = BoundednessVerdict::PowerBounded;
    long long offending_exponent = -1; // set on overflow / divergence
};

PowerProfile power_profile(const ComplexMatrix& t, int budget);

enum class LimitMode { MonotoneContraction, AlmostConvergent, BanachDependent };

const char* to_string(LimitMode mode);

// Approximation of the asymptotic limit of T with convergence diagnostics.
struct AsymptoticReport {
    ComplexMatrix A;
    LimitMode mode = LimitMode::MonotoneContraction;
    double residual = 0.0;       // measured ||T*AT - A||
    double residual_tol = 0.0;   // declared bound the residual is guaranteed to meet
    double window_spread = 0.0;  // dispersion of windowed means (surrogate only)
    std::size_t kernel_dim = 0;
    double gamma = 0.0;          // reduced minimum modulus of A
    bool gamma_zero_operator = false;
    double min_spec = 0.0;       // smallest eigenvalue of A
    double norm_A = 0.0;         // largest eigenvalue of A
    double kernel_tol = 0.0;     // absolute threshold used for kernel decisions
    bool converged = true;       // false when the iteration budget ran out
    bool monotone_ok = true;     // every accepted step had Q_n - Q_{n+1} >= -eig_tol
    double monotone_margin = 0.0;
    bool norm_floor_ok = true;   // ||A|| >= 1 - 10 tol whenever A != 0
    long iterations = 0;
    double window_min_eig = 0.0; // extremes of min eigenvalue over window means
    double window_min_eig_max = 0.0;
    Params params;

    bool nonzero() const { return norm_A > kernel_tol; }
};

// Decreasing limit of Q_n = T*^n T^n for a contraction, iterated as
// Q <- T* Q T with re-symmetrization, stopping at ||Q_{n+1} - Q_n|| <= tol.
// Budget exhaustion returns the partial iterate flagged (converged = false)
// rather than raising.
AsymptoticReport asymptotic_limit_contraction(const ComplexMatrix& t, const Params& params = {});

// Banach-limit surrogate for a power-bounded T: sliding-window means of
// Q_0..Q_N at lengths {N/4, N/2, N} and trailing offsets {0, N/8, N/4, 3N/8}
// (windows anchored at the end of the budget so transients of convergent
// sequences wash out).  Uniform agreement to 10*tol is the almost-convergence
// criterion; disagreement is reported as BanachDependent with the dispersion,
// never papered over with a fabricated value.
AsymptoticReport l_asymptotic_surrogate(const ComplexMatrix& t, const Params& params = {});

// contraction path when ||T|| <= 1 + slack, surrogate otherwise
AsymptoticReport asymptotic_report(const ComplexMatrix& t, const Params& params = {});

// K = numerical kernel of the report's A = stable subspace of T.  Each kernel
// basis vector is independently validated by orbit decay:
// ||T^decay_budget x|| <= decay_threshold, else KernelValidationFailed.
BlockSplit stable_subspace(const ComplexMatrix& t, const AsymptoticReport& report,
                           const Params& params = {}, bool accept_banach_dependent = false);

// Upper-triangular block form of T over H0 + H0perp.
struct KerchySplit {
    BlockSplit split;             // K = H0 first, complement second
    ComplexMatrix in_split_basis; // B* T B
    std::size_t k_dim = 0;
    ComplexMatrix t00;            // compression to H0 (square)
    ComplexMatrix t11;            // compression to H0perp (square)
    double lower_left_norm = 0.0;
    double coupling_norm = 0.0;   // Frobenius norm of the upper-right block
    bool c0_block_ok = true;      // powers of t00 decay within budget
    bool c1_block_ok = true;      // t11 has trivial numerical stable subspace
};

KerchySplit kerchy_decompose(const ComplexMatrix& t, const AsymptoticReport& report,
                             const Params& params = {});

// as above but with a caller-supplied candidate splitting (diagnostic use)
KerchySplit kerchy_decompose_with_split(const ComplexMatrix& t, const BlockSplit& split,
                                        const Params& params = {});

enum class CClass { C00, C01, C10, C11, C0dot, C1dot, Mixed };

const char* to_string(CClass c);

// classification by the kernels of the asymptotic limits of T and T*
CClass classify_C(const ComplexMatrix& t, const Params& params = {});

// || A_{UTU*} - U A_T U* || with identical surrogate parameters on each side
double unitary_conjugation_check(const ComplexMatrix& t, const ComplexMatrix& u,
                                 const Params& params = {});

} // namespace asymlab
