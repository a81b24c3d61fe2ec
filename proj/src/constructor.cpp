#include "asymlab/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asymlab/errors.hpp"

namespace asymlab {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-15 * std::max({1.0, a, b}); }

} // namespace

ValidatedTarget validate_target(const TargetSpectrum& spec) {
    if (spec.atoms.empty())
        fail(ErrorCode::HypothesisViolation, "empty spectrum: a positive contraction needs atoms");

    ValidatedTarget out;
    out.spec = spec;

    double min_atom = std::numeric_limits<double>::infinity();
    for (const auto& atom : spec.atoms) {
        if (!(atom.lambda > 0.0) || atom.lambda > 1.0 + 1e-15)
            fail(ErrorCode::HypothesisViolation,
                 "atom " + std::to_string(atom.lambda) +
                     " lies outside (0, 1]: not a positive invertible contraction");
        if (!atom.infinite && atom.mult < 1)
            fail(ErrorCode::HypothesisViolation, "atom multiplicity must be >= 1");
        min_atom = std::min(min_atom, atom.lambda);
    }

    // inner spectral radius
    if (spec.r_under) {
        const double r = *spec.r_under;
        if (!(r > 0.0) || r > min_atom + 1e-15)
            fail(ErrorCode::HypothesisViolation,
                 "declared inner spectral radius must sit in (0, min atom]");
        if (r < min_atom - 1e-15 && !spec.accumulates_at_r_under)
            fail(ErrorCode::HypothesisViolation,
                 "r_under below every atom requires the accumulation flag, otherwise it is "
                 "not in the spectrum");
        out.r_under = r;
    } else {
        if (spec.accumulates_at_r_under)
            fail(ErrorCode::HypothesisViolation,
                 "accumulation at r_under declared without an explicit r_under value");
        out.r_under = min_atom;
    }

    // multiplicity dichotomy at r_under
    for (const auto& atom : spec.atoms) {
        if (!near(atom.lambda, out.r_under)) continue;
        if (atom.infinite) {
            out.inf_at_r_under = true;
        } else if (out.r_under < 1.0 - 1e-15) {
            fail(ErrorCode::HypothesisViolation,
                 "finite nonzero multiplicity at the inner spectral radius: dim ker(A - rI) "
                 "must be 0 or infinite for the asymptotic limit of a contraction similar to "
                 "a unitary");
        }
    }

    // content at 1: infinite stays, finite splits off as an identity summand
    bool inf_at_one = false;
    long finite_at_one = 0;
    for (const auto& atom : spec.atoms) {
        if (!near(atom.lambda, 1.0)) continue;
        if (atom.infinite)
            inf_at_one = true;
        else
            finite_at_one += atom.mult;
    }
    out.inf_at_one = inf_at_one;
    if (finite_at_one > 0 && !inf_at_one) {
        out.identity_summand_dim = finite_at_one;
        out.log.push_back("split off a " + std::to_string(finite_at_one) +
                          "-dimensional identity summand carrying the finite multiplicity at 1");
    }
    if (!inf_at_one && !spec.accumulates_at_one)
        fail(ErrorCode::HypothesisViolation,
             "1 is not in the essential spectrum (no infinite atom at 1 and no accumulation)");

    if (out.r_under >= 1.0 - 1e-15) {
        out.degenerate_identity = true;
        out.log.push_back("r_under = 1: the target is the identity and T is the unitary itself");
    }
    return out;
}

ConstructionPlan build_partition(const ValidatedTarget& target, long window, long level_dim_cap) {
    if (window < 1) fail(ErrorCode::InvalidArgument, "window must be >= 1");
    if (level_dim_cap < 1) fail(ErrorCode::InvalidArgument, "level dimension cap must be >= 1");

    ConstructionPlan plan;
    plan.r_under = target.r_under;
    plan.window = window;
    plan.level_dim_cap = level_dim_cap;
    plan.degenerate_identity = target.degenerate_identity;
    plan.log = target.log;

    const double r = target.r_under;
    plan.a.resize(static_cast<std::size_t>(2 * window + 1));
    for (long k = -window; k <= window; ++k) {
        const double p = std::pow(2.0, static_cast<double>(k));
        plan.a[static_cast<std::size_t>(k + window)] = r + (1.0 - r) * p / (1.0 + p);
    }

    plan.levels.resize(static_cast<std::size_t>(2 * window));
    for (long k = -window; k < window; ++k) plan.levels[static_cast<std::size_t>(k + window)].k = k;

    if (plan.degenerate_identity) {
        plan.level_dim = level_dim_cap;
        for (auto& level : plan.levels)
            level.values.assign(static_cast<std::size_t>(level_dim_cap), 1.0);
        plan.positive_case = "degenerate_identity";
        plan.nonpositive_case = "degenerate_identity";
        return plan;
    }

    const long d_m = target.inf_at_r_under ? level_dim_cap : 0;
    const long d_n = target.inf_at_one ? level_dim_cap : 0;

    // distribute interval content
    bool any_content = false;
    bool inf_in_positive = false, inf_in_negative = false, inf_at_zero = false;
    for (const auto& atom : target.spec.atoms) {
        if (near(atom.lambda, 1.0) || near(atom.lambda, r)) continue; // M and N handled per level
        long k = -window;
        while (k < window - 1 && atom.lambda >= plan.a_at(k + 1)) ++k;
        auto& level = plan.levels[static_cast<std::size_t>(k + window)];
        const long copies = atom.infinite ? level_dim_cap : atom.mult;
        for (long c = 0; c < copies; ++c) level.values.push_back(atom.lambda);
        any_content = true;
        if (atom.infinite) {
            if (k > 0) inf_in_positive = true;
            if (k < 0) inf_in_negative = true;
            if (k == 0) inf_at_zero = true;
        }
    }
    plan.positive_case = inf_in_positive ? "Case1_infinite_Xk" : "Case2_finite_Xk";
    plan.nonpositive_case = inf_in_negative ? "Case1" : (inf_at_zero ? "Case3" : "Case2");

    // per-level fixed blocks: r_under copies below zero, ones above
    for (long k = -window; k < window; ++k) {
        auto& level = plan.levels[static_cast<std::size_t>(k + window)];
        if (k < 0)
            for (long c = 0; c < d_m; ++c) level.values.push_back(r);
        if (k >= 1)
            for (long c = 0; c < d_n; ++c) level.values.push_back(1.0);
        std::sort(level.values.begin(), level.values.end());
        if (!level.values.empty()) any_content = true;
    }
    if (!any_content)
        fail(ErrorCode::EmptyWindow, "no spectrum content lands inside the window intervals");

    std::size_t dim_needed = 0;
    for (const auto& level : plan.levels) dim_needed = std::max(dim_needed, level.values.size());
    plan.level_dim = static_cast<long>(dim_needed);

    // dimension equalization: pad short levels with the largest non-unit
    // eigenvalue seen so far (the adjacent interval's content), never with 1,
    // so the sorted per-slot pairing stays monotone along the shift direction
    double carry = target.inf_at_r_under ? r : std::numeric_limits<double>::quiet_NaN();
    long total_pads = 0;
    for (long k = -window; k < window; ++k) {
        auto& level = plan.levels[static_cast<std::size_t>(k + window)];
        for (const double v : level.values)
            if (v < 1.0 - 1e-15 && (std::isnan(carry) || v > carry)) carry = v;
        if (std::isnan(carry)) {
            // nothing below 1 seen yet: borrow the smallest upcoming value
            double lowest_later = 1.0;
            for (long kk = k; kk < window; ++kk)
                for (const double v : plan.levels[static_cast<std::size_t>(kk + window)].values)
                    lowest_later = std::min(lowest_later, v);
            carry = lowest_later;
        }
        while (level.values.size() < dim_needed) {
            level.values.push_back(carry);
            ++level.pad_count;
            ++total_pads;
        }
        std::sort(level.values.begin(), level.values.end());
    }
    if (total_pads > 0) {
        std::ostringstream note;
        note << total_pads << " pad eigenvalues inserted to equalize level dimensions at "
             << plan.level_dim;
        plan.log.push_back(note.str());
    }
    return plan;
}

std::vector<Complex> ConstructionResult::apply_t(const std::vector<Complex>& x) const {
    std::vector<Complex> y(dim, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim; ++i) y[u_target[i]] += t_weight[i] * x[i];
    return y;
}

std::vector<Complex> ConstructionResult::apply_t_adjoint(const std::vector<Complex>& x) const {
    std::vector<Complex> y(dim, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim; ++i) y[i] = t_weight[i] * x[u_target[i]];
    return y;
}

ConstructionResult assemble(const ConstructionPlan& plan) {
    const long window = plan.window;
    const long d = plan.level_dim;
    if (d < 1) fail(ErrorCode::EmptyWindow, "plan has no level content");

    // condition (iii) per non-wrap edge: sorted values must be slotwise
    // nondecreasing from Y_k to Y_{k+1}
    for (long k = -window; k + 1 < window; ++k) {
        const auto& cur = plan.level(k).values;
        const auto& next = plan.level(k + 1).values;
        for (long l = 0; l < d; ++l)
            if (cur[static_cast<std::size_t>(l)] > next[static_cast<std::size_t>(l)])
                fail(ErrorCode::ConditionIIIViolated,
                     "levels " + std::to_string(k) + " -> " + std::to_string(k + 1) +
                         " decrease at slot " + std::to_string(l));
    }

    ConstructionResult result;
    result.plan = plan;
    result.dim = static_cast<std::size_t>(2 * window * d);
    result.alpha.resize(result.dim);
    result.u_target.resize(result.dim);
    result.t_weight.resize(result.dim);

    for (long k = -window; k < window; ++k)
        for (long l = 0; l < d; ++l)
            result.alpha[result.index_of(k, l)] = plan.level(k).values[static_cast<std::size_t>(l)];

    result.A = ComplexMatrix::diagonal(result.alpha);
    result.U = ComplexMatrix(result.dim);
    result.T = ComplexMatrix(result.dim);

    for (long k = -window; k < window; ++k) {
        const long k_next = (k + 1 < window) ? k + 1 : -window; // cyclic wrap at the edge
        const bool wrap = (k + 1 >= window);
        for (long l = 0; l < d; ++l) {
            const std::size_t from = result.index_of(k, l);
            const std::size_t to = result.index_of(k_next, l);
            result.u_target[from] = to;
            result.U(to, from) = 1.0;
            const double weight = std::sqrt(result.alpha[from] / result.alpha[to]);
            result.t_weight[from] = weight;
            result.T(to, from) = weight;
            if (wrap)
                result.wrap_defect = std::max(result.wrap_defect, weight - 1.0);
            else
                result.interior_contraction_defect =
                    std::max(result.interior_contraction_defect, weight - 1.0);
        }
    }
    return result;
}

ConstructionResult construct(const TargetSpectrum& spec, long window, long level_dim_cap) {
    return assemble(build_partition(validate_target(spec), window, level_dim_cap));
}

ConvergenceReport verify_convergence(const ConstructionResult& result, long n_max) {
    if (n_max < 0) fail(ErrorCode::InvalidArgument, "n_max must be >= 0");
    const long window = result.plan.window;
    const long d = result.plan.level_dim;
    const double norm_a = *std::max_element(result.alpha.begin(), result.alpha.end());
    const double sqrt_norm_a = std::sqrt(norm_a);

    ConvergenceReport report;
    for (long k = -window; k < window; ++k) {
        const long reach = std::min(n_max, window - 1 - k);
        if (reach < 0) continue;
        for (long l = 0; l < d; ++l) {
            std::vector<Complex> x(result.dim, Complex(0.0, 0.0));
            const std::size_t idx = result.index_of(k, l);
            x[idx] = 1.0;
            std::vector<Complex> forward = x;
            for (long n = 0; n <= reach; ++n) {
                if (n > 0) forward = result.apply_t(forward);
                std::vector<Complex> back = forward;
                for (long m = 0; m < n; ++m) back = result.apply_t_adjoint(back);
                // measured || T*^n T^n y - A y ||
                back[idx] -= result.alpha[idx];
                const double measured = vec_norm(back);

                double level_gap = 0.0;
                for (long l2 = 0; l2 < d; ++l2) {
                    const double alpha_kn = result.alpha[result.index_of(k + n, l2)];
                    level_gap = std::max(level_gap, 1.0 / alpha_kn - 1.0);
                }
                const double bound = sqrt_norm_a * level_gap * std::sqrt(result.alpha[idx]);

                ConvergenceEntry entry{k, l, n, measured, bound,
                                       bound > 0.0 ? measured / bound : 0.0};
                report.max_measured = std::max(report.max_measured, measured);
                report.max_ratio = std::max(report.max_ratio, entry.ratio);
                if (measured > bound * (1.0 + 1e-12) + 1e-15)
                    fail(ErrorCode::BoundViolated,
                         "convergence bound violated at level " + std::to_string(k) + ", slot " +
                             std::to_string(l) + ", power " + std::to_string(n) + ": measured " +
                             std::to_string(measured) + " > bound " + std::to_string(bound));
                report.rows.push_back(entry);
            }
        }
    }
    return report;
}

DichotomyProbe eigenspace_dichotomy_probe(const TargetSpectrum& spec,
                                          const std::vector<long>& windows, long level_dim_cap) {
    const auto target = validate_target(spec);
    DichotomyProbe probe;
    probe.windows = windows;
    for (const long w : windows) {
        const auto plan = build_partition(target, w, level_dim_cap);
        long count = 0;
        if (!plan.degenerate_identity) {
            for (const auto& level : plan.levels)
                for (const double v : level.values)
                    if (near(v, plan.r_under)) ++count;
        }
        probe.kernel_dims.push_back(count);
    }
    probe.always_zero = std::all_of(probe.kernel_dims.begin(), probe.kernel_dims.end(),
                                    [](long c) { return c == 0; });
    probe.grows = probe.kernel_dims.size() >= 2 &&
                  probe.kernel_dims.back() > probe.kernel_dims.front();
    return probe;
}

} // namespace asymlab
