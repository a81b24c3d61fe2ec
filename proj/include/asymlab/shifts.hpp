#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asymlab/complex_matrix.hpp"

namespace asymlab {

// Weight tail: constant or periodic magnitude pattern.  A periodic right
// tail tiles forward from the core boundary (pattern[0] at index hi); a
// periodic left tail tiles backward, ending just before lo (pattern ends at
// index lo - 1).
struct Tail {
    enum class Kind { Constant, Periodic };
    Kind kind = Kind::Constant;
    std::vector<double> pattern = {1.0};

    static Tail constant(double value) { return {Kind::Constant, {value}}; }
    static Tail periodic(std::vector<double> values) { return {Kind::Periodic, std::move(values)}; }

    std::size_t period() const { return pattern.size(); }
    double product() const;
};

// Symbolic two-sided weight sequence: explicit positive magnitudes on
// [lo, hi), structured tails beyond.  Phases are dropped -- every quantity
// in scope depends on |w_k| only, and shifts with equal weight moduli are
// unitarily equivalent.
struct WeightSequence {
    long lo = 0;
    long hi = 0;
    std::vector<double> core;
    Tail left = Tail::constant(1.0);
    Tail right = Tail::constant(1.0);

    void validate() const;
    double weight(long k) const;
};

// exact sup / inf over k, n of the contiguous weight products (length >= 1):
// sup is +infinity iff either tail has period product > 1; inf is 0 iff
// either tail has period product < 1; otherwise both are attained by
// products with endpoints within one period of the core.
struct ProductBounds {
    double sup = 0.0; // +infinity encodes divergence
    double inf = 0.0;
};

ProductBounds product_bounds(const WeightSequence& w);

// Closed-form analysis: power boundedness, similarity to a unitary, and the
// diagonal asymptotic limit diag_limit(k) (the tail-cycle mean of the squared
// partial products; a periodic sequence is almost convergent to its period
// mean, so the value is Banach-limit independent).
struct ShiftAnalysis {
    ProductBounds bounds;
    bool power_bounded = false;
    bool similar_to_unitary = false;
    bool has_diag_limit = false;

    // diag_limit(k) = limit_scale * (prefix(hi) / prefix(k))^2, zero when the
    // right tail contracts; table holds one full set of representative values
    double tail_cycle_mean = 1.0;
    std::map<long, double> diag_table; // k in [lo - left period, hi + right period)
    double gamma = 0.0;                // inf of nonzero diag values (0 if only approached)
    bool gamma_attained = true;
    double norm_limit = 0.0;           // sup of diag values
    std::string description;

    double diag_limit(long k) const;   // closed form at any integer k
    bool zero_limit = false;           // right tail contracts: limit identically 0

    // cached closed-form data
    long lo = 0, hi = 0;
    std::vector<double> core;
    Tail left, right;
};

ShiftAnalysis classify_shift(const WeightSequence& w);

// (2W+1)-dimensional truncation on basis indices -W..W; the boundary column
// either drops (Zero) or wraps (Cyclic).
enum class Boundary { Zero, Cyclic };

ComplexMatrix truncate_to_matrix(const WeightSequence& w, long window, Boundary boundary);

// Symbolic one-parameter families i -> weight sequence, restricted to rules
// with monotone gamma so exact infima over i in N are available.
struct FamilyRule {
    enum class Kind { ReciprocalDip, ReciprocalSquareDip, GeometricDip, ConstantDip, LinearGrowthDip };
    Kind kind = Kind::ReciprocalDip;
    double constant = 0.5; // ConstantDip value
    long explicit_count = 0; // how many leading members to also treat explicitly

    double dip(long i) const;        // single-dip magnitude of member i (i >= 1)
    double limit_gamma() const;      // inf over i in N of gamma(A_i)
    double sup_norm_limit() const;   // sup over i in N of ||A_i|| (inf = unbounded)
    std::string text() const;
    WeightSequence member(long i) const;
};

std::optional<FamilyRule> parse_family_rule(const std::string& kind, const std::string& dip,
                                            long count);

struct ShiftSumSpec {
    std::vector<WeightSequence> summands;
    std::optional<FamilyRule> family;
};

enum class SumVerdict { SimilarToUnitary, NotSimilarToAnyNormal, Inconclusive };

const char* to_string(SumVerdict v);

// Orthogonal sums of unitary-similar shifts: invertibility of the direct-sum
// limit decides everything.  inf gamma > 0 gives a diagonal conjugation to a
// plain bilateral shift sum; inf gamma = 0 with every diagonal entry positive
// gives an injective, non-invertible limit, which rules out similarity to any
// normal operator.
struct SumAnalysis {
    SumVerdict verdict = SumVerdict::Inconclusive;
    double sup_norm_limit = 0.0;
    double inf_gamma = 0.0;
    bool inf_gamma_attained = true;
    bool all_entries_positive = true;
    std::vector<double> gamma_per_summand;     // explicit summands first, then family samples
    double certificate_defect = 0.0;           // diagonal-conjugation isometry defect
    double certificate_cond = 0.0;             // condition of the conjugation
    std::map<std::string, std::string> notes;
};

SumAnalysis sum_analysis(const ShiftSumSpec& spec, long certificate_window = 16);

} // namespace asymlab
