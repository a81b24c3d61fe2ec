#include "asymlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "asymlab/errors.hpp"
#include "asymlab/rng.hpp"

namespace asymlab {

void Params::validate() const {
    if (tol <= 0.0 || eig_tol <= 0.0 || kernel_tol_rel <= 0.0 || decay_threshold <= 0.0)
        fail(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (power_budget < 8 || max_iter < 1 || decay_budget < 1 || sample_count < 1)
        fail(ErrorCode::InvalidArgument, "budgets must be positive (power budget >= 8)");
    if (kernel_tol_rel > eig_tol * 1e3)
        fail(ErrorCode::ToleranceConflict,
             "kernel tolerance exceeds 1e3 * eigensolver tolerance; kernel decisions would "
             "be less accurate than the spectra they are made from");
}

const char* to_string(BoundednessVerdict v) {
    switch (v) {
        case BoundednessVerdict::PowerBounded: return "PowerBounded";
        case BoundednessVerdict::NotPowerBounded: return "NotPowerBounded";
        case BoundednessVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(LimitMode mode) {
    switch (mode) {
        case LimitMode::MonotoneContraction: return "MonotoneContraction";
        case LimitMode::AlmostConvergent: return "AlmostConvergent";
        case LimitMode::BanachDependent: return "BanachDependent";
    }
    return "?";
}

const char* to_string(CClass c) {
    switch (c) {
        case CClass::C00: return "C00";
        case CClass::C01: return "C01";
        case CClass::C10: return "C10";
        case CClass::C11: return "C11";
        case CClass::C0dot: return "C0.";
        case CClass::C1dot: return "C1.";
        case CClass::Mixed: return "Mixed";
    }
    return "?";
}

PowerProfile power_profile(const ComplexMatrix& t, int budget) {
    if (budget < 1) fail(ErrorCode::InvalidArgument, "power budget must be >= 1");
    PowerProfile profile;
    const double norm_t = op_norm(t);
    const double blowup = 1e6 * std::max(norm_t, 1e-300);

    ComplexMatrix p = t;
    long long n = 1;
    const long long direct_limit = std::min<long long>(budget, 64);
    bool overflowed = false;

    auto record = [&](long long exponent, const ComplexMatrix& power) -> bool {
        if (!power.all_finite() || power.max_abs() > 1e120) {
            profile.verdict = BoundednessVerdict::NotPowerBounded;
            profile.offending_exponent = exponent;
            overflowed = true;
            return false;
        }
        const double norm = op_norm(power);
        profile.norms.emplace_back(exponent, norm);
        profile.sup_estimate = std::max(profile.sup_estimate, norm);
        return true;
    };

    if (!record(1, p)) return profile;
    while (!overflowed && n < direct_limit) {
        p = p * t;
        ++n;
        if (!record(n, p)) break;
    }
    while (!overflowed && 2 * n <= budget) {
        p = p * p;
        n *= 2;
        if (!record(n, p)) break;
    }

    if (overflowed) return profile;

    // growth ratios across doublings n -> 2n, wherever both were recorded
    std::vector<double> ratios;
    for (const auto& [na, va] : profile.norms) {
        if (va <= 0.0) continue;
        for (const auto& [nb, vb] : profile.norms)
            if (nb == 2 * na) ratios.push_back(vb / va);
    }

    if (profile.sup_estimate > blowup) {
        profile.verdict = BoundednessVerdict::NotPowerBounded;
        for (const auto& [exp, norm] : profile.norms)
            if (norm > blowup) {
                profile.offending_exponent = exp;
                break;
            }
        return profile;
    }

    int consecutive = 0;
    for (const double r : ratios) {
        consecutive = (r >= 1.5) ? consecutive + 1 : 0;
        if (consecutive >= 4) {
            profile.verdict = BoundednessVerdict::NotPowerBounded;
            profile.offending_exponent = profile.norms.back().first;
            return profile;
        }
    }

    const bool still_growing = !ratios.empty() && ratios.back() > 1.0 + 1e-8;
    profile.verdict = still_growing ? BoundednessVerdict::Inconclusive
                                    : BoundednessVerdict::PowerBounded;
    return profile;
}

namespace {

// spectral diagnostics shared by both limit paths
void finish_report(AsymptoticReport& report, const ComplexMatrix& t) {
    report.A = report.A.hermitized();
    const auto eig = herm_eig(report.A, report.params.eig_tol);
    report.min_spec = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    report.norm_A = eig.eigenvalues.empty() ? 0.0 : std::abs(eig.eigenvalues.back());
    report.kernel_tol = report.params.kernel_tol_for(report.norm_A);
    report.kernel_dim = 0;
    double gamma = std::numeric_limits<double>::infinity();
    for (const double w : eig.eigenvalues) {
        if (w <= report.kernel_tol)
            ++report.kernel_dim;
        else
            gamma = std::min(gamma, w);
    }
    report.gamma_zero_operator = (report.kernel_dim == eig.eigenvalues.size());
    report.gamma = report.gamma_zero_operator ? std::numeric_limits<double>::infinity() : gamma;

    const ComplexMatrix tat = (t.adjoint() * report.A * t).hermitized();
    report.residual = op_norm(tat - report.A, report.params.eig_tol);

    report.norm_floor_ok =
        report.gamma_zero_operator || report.norm_A >= 1.0 - 10.0 * report.params.tol;
}

} // namespace

AsymptoticReport asymptotic_limit_contraction(const ComplexMatrix& t, const Params& params) {
    params.validate();
    const double norm_t = op_norm(t, params.eig_tol);
    if (norm_t > 1.0 + params.op_norm_slack)
        fail(ErrorCode::NotAContraction,
             "||T|| = " + std::to_string(norm_t) + " exceeds 1 + slack");

    AsymptoticReport report;
    report.params = params;
    report.mode = LimitMode::MonotoneContraction;

    const ComplexMatrix t_adj = t.adjoint();
    ComplexMatrix q = ComplexMatrix::identity(t.dim());
    bool converged = false;
    long steps = 0;
    for (; steps < params.max_iter; ++steps) {
        const ComplexMatrix next = (t_adj * q * t).hermitized();
        const ComplexMatrix diff = q - next;
        const double scale = std::max(q.frobenius_norm(), 1.0);
        const auto psd = psd_check(diff, params.eig_tol * scale);
        if (!psd.psd) report.monotone_ok = false;
        report.monotone_margin = std::min(report.monotone_margin, psd.min_diag);
        q = next;
        if (diff.frobenius_norm() <= params.tol) {
            converged = true;
            ++steps;
            break;
        }
    }
    report.converged = converged;
    report.iterations = steps;
    report.A = q;
    report.residual_tol = params.tol;
    finish_report(report, t);
    report.window_min_eig = report.min_spec;
    report.window_min_eig_max = report.min_spec;
    return report;
}

AsymptoticReport l_asymptotic_surrogate(const ComplexMatrix& t, const Params& params) {
    params.validate();
    const auto profile = power_profile(t, params.power_budget);
    if (profile.verdict != BoundednessVerdict::PowerBounded)
        fail(ErrorCode::NotPowerBounded,
             std::string("power profile verdict is ") + to_string(profile.verdict));

    const long n_budget = params.power_budget;
    const std::size_t dim = t.dim();

    // trailing-anchored windows: (length m, offset k back from the end)
    // covers iterate indices [N - k - m + 1, N - k]
    const long lengths[] = {n_budget / 4, n_budget / 2, n_budget};
    const long offsets[] = {0, n_budget / 8, n_budget / 4, 3 * n_budget / 8};
    struct Window {
        long start, len;
    };
    std::vector<Window> windows;
    for (const long m : lengths)
        for (const long k : offsets) {
            const long start = n_budget - k - m + 1;
            if (m >= 1 && start >= 0) windows.push_back({start, m});
        }

    std::set<long> cuts; // prefix-sum snapshots needed: S_{start-1} and S_{end}
    for (const auto& w : windows) {
        cuts.insert(w.start - 1);
        cuts.insert(w.start + w.len - 1);
    }

    const ComplexMatrix t_adj = t.adjoint();
    ComplexMatrix q = ComplexMatrix::identity(dim);
    ComplexMatrix running_sum(dim);
    std::vector<std::pair<long, ComplexMatrix>> snapshots;
    double max_q_fro = 0.0;
    if (cuts.count(-1)) snapshots.emplace_back(-1, ComplexMatrix(dim));
    for (long j = 0; j <= n_budget; ++j) {
        if (j > 0) q = (t_adj * q * t).hermitized();
        running_sum += q;
        max_q_fro = std::max(max_q_fro, q.frobenius_norm());
        if (cuts.count(j)) snapshots.emplace_back(j, running_sum);
    }

    auto prefix = [&](long j) -> const ComplexMatrix& {
        for (const auto& [idx, mat] : snapshots)
            if (idx == j) return mat;
        fail(ErrorCode::InvalidArgument, "internal: missing prefix snapshot");
    };

    std::vector<ComplexMatrix> means;
    means.reserve(windows.size());
    for (const auto& w : windows) {
        ComplexMatrix m = prefix(w.start + w.len - 1) - prefix(w.start - 1);
        m *= Complex(1.0 / static_cast<double>(w.len), 0.0);
        means.push_back(m.hermitized());
    }

    // Lorentz criterion at finite budget: for each window length, the means
    // at different offsets must agree.  Means of different lengths are not
    // compared (they differ by an intrinsic O(1/m) Cesaro term even for
    // convergent sequences).
    double offset_spread = 0.0;
    for (const long m : lengths) {
        for (std::size_t a = 0; a < windows.size(); ++a) {
            if (windows[a].len != m) continue;
            for (std::size_t b = a + 1; b < windows.size(); ++b) {
                if (windows[b].len != m) continue;
                offset_spread =
                    std::max(offset_spread, op_norm(means[a] - means[b], params.eig_tol));
            }
        }
    }
    double full_spread = offset_spread;
    for (std::size_t a = 0; a < means.size(); ++a)
        for (std::size_t b = a + 1; b < means.size(); ++b)
            full_spread = std::max(full_spread, op_norm(means[a] - means[b], params.eig_tol));

    AsymptoticReport report;
    report.params = params;
    report.window_spread = full_spread;
    report.mode = (offset_spread <= 10.0 * params.tol) ? LimitMode::AlmostConvergent
                                                       : LimitMode::BanachDependent;
    report.iterations = n_budget;

    // Consensus: the trailing quarter [3N/4 + 1, N] (all windows agree with
    // it within the criterion, and transients have washed out of it).  When
    // the criterion fails, the least committal value is the full-budget mean.
    std::size_t best = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const bool tail_quarter = windows[i].len == n_budget / 4 && windows[i].start == n_budget - windows[i].len + 1;
        const bool full = windows[i].len == n_budget;
        if ((report.mode == LimitMode::AlmostConvergent && tail_quarter) ||
            (report.mode == LimitMode::BanachDependent && full))
            best = i;
    }
    report.A = means[best];

    report.window_min_eig = std::numeric_limits<double>::infinity();
    report.window_min_eig_max = -std::numeric_limits<double>::infinity();
    for (const auto& m : means) {
        const auto eig = herm_eig(m, params.eig_tol);
        const double lo = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
        report.window_min_eig = std::min(report.window_min_eig, lo);
        report.window_min_eig_max = std::max(report.window_min_eig_max, lo);
    }

    // shift-by-one bound on a windowed mean: ||T*MT - M|| = ||Q_{e+1} - Q_s|| / m
    report.residual_tol =
        10.0 * params.tol + 2.0 * (max_q_fro + 1.0) / static_cast<double>(windows[best].len);
    finish_report(report, t);
    return report;
}

AsymptoticReport asymptotic_report(const ComplexMatrix& t, const Params& params) {
    if (op_norm(t, params.eig_tol) <= 1.0 + params.op_norm_slack)
        return asymptotic_limit_contraction(t, params);
    return l_asymptotic_surrogate(t, params);
}

BlockSplit stable_subspace(const ComplexMatrix& t, const AsymptoticReport& report,
                           const Params& params, bool accept_banach_dependent) {
    if (report.mode == LimitMode::BanachDependent && !accept_banach_dependent)
        fail(ErrorCode::KernelValidationFailed,
             "surrogate is Banach-limit dependent; pass accept_banach_dependent to use its kernel");

    BlockSplit split = kernel_split(report.A, report.kernel_tol, params.eig_tol);

    // independent validation: kernel vectors must have decaying orbits
    const ComplexMatrix power =
        matrix_power(t, static_cast<unsigned long long>(params.decay_budget));
    Rng rng(params.seed ^ 0xabcdefULL);
    std::vector<std::vector<Complex>> probes;
    for (std::size_t j = 0; j < split.k_dim; ++j) probes.push_back(split.basis.column(j));
    if (split.k_dim > 1) {
        for (int s = 0; s < 4; ++s) {
            std::vector<Complex> x(t.dim(), Complex(0.0, 0.0));
            for (std::size_t j = 0; j < split.k_dim; ++j) {
                const Complex c = rng.gaussian_complex();
                const auto col = split.basis.column(j);
                for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * col[i];
            }
            const double norm = vec_norm(x);
            if (norm < 1e-12) continue;
            for (auto& v : x) v /= norm;
            probes.push_back(std::move(x));
        }
    }
    for (const auto& x : probes) {
        const double decay = vec_norm(power.apply(x));
        if (decay > params.decay_threshold)
            fail(ErrorCode::KernelValidationFailed,
                 "kernel vector orbit does not decay: ||T^" +
                     std::to_string(params.decay_budget) + " x|| = " + std::to_string(decay));
    }
    return split;
}

KerchySplit kerchy_decompose_with_split(const ComplexMatrix& t, const BlockSplit& split,
                                        const Params& params) {
    const std::size_t n = t.dim();
    const std::size_t k = split.k_dim;
    const std::size_t m = n - k;

    KerchySplit out;
    out.split = split;
    out.k_dim = k;
    out.in_split_basis = split.basis.adjoint() * t * split.basis;

    double lower = 0.0, coupling = 0.0;
    for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) lower += std::norm(out.in_split_basis(i, j));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = k; j < n; ++j) coupling += std::norm(out.in_split_basis(i, j));
    out.lower_left_norm = std::sqrt(lower);
    out.coupling_norm = std::sqrt(coupling);

    const double split_tol = 1e-7 * std::max(op_norm(t, params.eig_tol), 1.0);
    if (out.lower_left_norm > split_tol)
        fail(ErrorCode::InvarianceViolation,
             "stable subspace is not invariant: lower-left block norm " +
                 std::to_string(out.lower_left_norm));

    out.t00 = ComplexMatrix(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out.t00(i, j) = out.in_split_basis(i, j);
    out.t11 = ComplexMatrix(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) out.t11(i, j) = out.in_split_basis(k + i, k + j);

    if (k > 0) {
        const ComplexMatrix decayed = matrix_power(
            out.t00, static_cast<unsigned long long>(std::max(params.decay_budget, 256)));
        out.c0_block_ok = op_norm(decayed, params.eig_tol) <= params.decay_threshold;
    }
    if (m > 0) {
        Params sub = params;
        sub.power_budget = std::min(params.power_budget, 512);
        const auto sub_report = asymptotic_report(out.t11, sub);
        out.c1_block_ok = (sub_report.kernel_dim == 0);
    }
    return out;
}

KerchySplit kerchy_decompose(const ComplexMatrix& t, const AsymptoticReport& report,
                             const Params& params) {
    return kerchy_decompose_with_split(t, stable_subspace(t, report, params), params);
}

CClass classify_C(const ComplexMatrix& t, const Params& params) {
    const auto report_t = asymptotic_report(t, params);
    const auto report_tstar = asymptotic_report(t.adjoint(), params);
    const std::size_t n = t.dim();

    // 0 = full kernel (stable everywhere), 1 = trivial kernel, 2 = proper
    auto row_of = [&](const AsymptoticReport& r) -> int {
        if (r.kernel_dim == n) return 0;
        if (r.kernel_dim == 0) return 1;
        return 2;
    };
    const int row = row_of(report_t);
    const int col = row_of(report_tstar);
    if (row == 0 && col == 0) return CClass::C00;
    if (row == 0 && col == 1) return CClass::C01;
    if (row == 1 && col == 0) return CClass::C10;
    if (row == 1 && col == 1) return CClass::C11;
    if (row == 0) return CClass::C0dot;
    if (row == 1) return CClass::C1dot;
    return CClass::Mixed;
}

double unitary_conjugation_check(const ComplexMatrix& t, const ComplexMatrix& u,
                                 const Params& params) {
    const double defect = max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.dim()));
    if (defect > 1e-8)
        fail(ErrorCode::NotUnitary, "conjugator defect ||U*U - I|| = " + std::to_string(defect));

    const ComplexMatrix conjugated = u * t * u.adjoint();
    const auto lhs = asymptotic_report(conjugated, params);
    const ComplexMatrix rhs = u * asymptotic_report(t, params).A * u.adjoint();
    return op_norm(lhs.A - rhs.hermitized(), params.eig_tol);
}

} // namespace asymlab
