#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asymlab/complex_matrix.hpp"

namespace asymlab {

// Symbolic spectrum of a positive invertible contraction: point atoms with
// finite or infinite multiplicity, plus accumulation flags for the parts a
// finite list cannot carry literally.  r_under is the inner spectral radius;
// when it lies strictly below every atom the accumulation flag must assert
// that the spectrum reaches down to it.
struct SpectrumAtom {
    double lambda = 0.0;
    long mult = 1;
    bool infinite = false;
};

struct TargetSpectrum {
    std::vector<SpectrumAtom> atoms;
    std::optional<double> r_under;
    bool accumulates_at_one = false;
    bool accumulates_at_r_under = false;
};

// Outcome of the hypothesis checklist:
//  - every atom in (0, 1], r_under > 0 (invertible positive contraction);
//  - 1 in the essential spectrum (an infinite atom at 1 or accumulation);
//  - the multiplicity at r_under is 0 or infinite -- the finite nonzero case
//    is exactly what the dichotomy theorem excludes;
//  - finite multiplicity at 1 is split off as an identity direct summand.
struct ValidatedTarget {
    TargetSpectrum spec;
    double r_under = 0.0;
    bool degenerate_identity = false; // r_under = 1: A = I and T = U
    long identity_summand_dim = 0;    // finite multiplicity split off at 1
    bool inf_at_r_under = false;
    bool inf_at_one = false;
    std::vector<std::string> log;
};

ValidatedTarget validate_target(const TargetSpectrum& spec);

// One level of the block shift: the ascending eigenvalue list carried by Y_k.
struct LevelSpec {
    long k = 0;
    std::vector<double> values;
    long pad_count = 0;
};

// Partition plan: a_k = r + (1 - r) 2^k / (1 + 2^k) on k in [-W, W], level
// eigenvalue lists of uniform length, case tags describing the finiteness
// pattern of the interval dimensions.
struct ConstructionPlan {
    double r_under = 0.0;
    long window = 0;       // W
    long level_dim = 0;    // uniform per-level dimension
    long level_dim_cap = 0; // d: expansion of infinite multiplicities
    std::vector<double> a; // a_k, k = -W..W  (index k + W)
    std::vector<LevelSpec> levels; // k = -W..W-1 (index k + W)
    std::string positive_case;
    std::string nonpositive_case;
    bool degenerate_identity = false;
    std::vector<std::string> log;

    double a_at(long k) const { return a[static_cast<std::size_t>(k + window)]; }
    const LevelSpec& level(long k) const { return levels[static_cast<std::size_t>(k + window)]; }
};

ConstructionPlan build_partition(const ValidatedTarget& target, long window, long level_dim_cap);

// Assembled model: A diagonal on the level basis, U the exact block
// permutation Y_k -> Y_{k+1} with a cyclic wrap at the window edge, and
// T = A^{-1/2} U A^{1/2}.  All weights live on one sub-block-diagonal, so T
// is applied through its sparse (target, weight) form.
struct ConstructionResult {
    ComplexMatrix A, U, T;
    ConstructionPlan plan;
    std::size_t dim = 0;
    std::vector<double> alpha;        // diagonal of A by index
    std::vector<std::size_t> u_target; // U e_i = e_{u_target[i]}
    std::vector<double> t_weight;      // T e_i = t_weight[i] e_{u_target[i]}
    double interior_contraction_defect = 0.0; // max over non-wrap columns of (||T e|| - 1)+
    double wrap_defect = 0.0;                 // max wrap-column norm excess

    std::size_t index_of(long k, long l) const {
        return static_cast<std::size_t>((k + plan.window) * plan.level_dim + l);
    }
    std::vector<Complex> apply_t(const std::vector<Complex>& x) const;
    std::vector<Complex> apply_t_adjoint(const std::vector<Complex>& x) const;
};

ConstructionResult assemble(const ConstructionPlan& plan);

// full pipeline
ConstructionResult construct(const TargetSpectrum& spec, long window, long level_dim_cap);

// Per-(k, l, n) comparison of the measured error ||T*^n T^n y - A y|| with
// the closed bound ||A^{1/2}|| ||(A^{-1} - I)|Y_{k+n}|| ||A^{1/2} y||,
// restricted to interior levels whose orbit never crosses the wrap edge.
// The inequality is a theorem of the construction, so a violation raises.
struct ConvergenceEntry {
    long k = 0;
    long l = 0;
    long n = 0;
    double measured = 0.0;
    double bound = 0.0;
    double ratio = 0.0; // measured / bound (0 when both vanish)
};

struct ConvergenceReport {
    std::vector<ConvergenceEntry> rows;
    double max_ratio = 0.0;
    double max_measured = 0.0;
    bool all_within_bound = true;
};

ConvergenceReport verify_convergence(const ConstructionResult& result, long n_max);

// dim ker(A - r_under I) as a function of the window size: identically zero
// for multiplicity-0 targets, linear growth for infinite-multiplicity ones
struct DichotomyProbe {
    std::vector<long> windows;
    std::vector<long> kernel_dims;
    bool always_zero = false;
    bool grows = false;
};

DichotomyProbe eigenspace_dichotomy_probe(const TargetSpectrum& spec,
                                          const std::vector<long>& windows, long level_dim_cap);

} // namespace asymlab
