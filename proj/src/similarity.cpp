#include "asymlab/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "asymlab/errors.hpp"
#include "asymlab/rng.hpp"

namespace asymlab {

const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::SimilarToUnitary: return "SimilarToUnitary";
        case VerdictKind::SimilarToIsometry: return "SimilarToIsometry";
        case VerdictKind::NotSimilarToIsometry: return "NotSimilarToIsometry";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

// smallest sampled ||T^n x|| / ||x|| over dyadic powers n <= budget, for unit
// probes drawn from the given basis columns (all of them plus random mixes)
double sampled_orbit_floor(const ComplexMatrix& t, const std::vector<std::vector<Complex>>& probes,
                           int power_budget) {
    std::vector<ComplexMatrix> powers;
    ComplexMatrix p = t;
    for (int n = 1; n <= power_budget; n *= 2) {
        powers.push_back(p);
        if (2 * n <= power_budget) p = p * p;
    }
    double floor_seen = std::numeric_limits<double>::infinity();
    for (const auto& x : probes) {
        const double nx = vec_norm(x);
        if (nx < 1e-14) continue;
        for (const auto& pw : powers)
            floor_seen = std::min(floor_seen, vec_norm(pw.apply(x)) / nx);
    }
    return floor_seen;
}

std::vector<std::vector<Complex>> probe_set(std::size_t dim, Rng& rng, int samples) {
    std::vector<std::vector<Complex>> probes;
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<Complex> e(dim, Complex(0.0, 0.0));
        e[i] = 1.0;
        probes.push_back(std::move(e));
    }
    for (int s = 0; s < samples; ++s) {
        std::vector<Complex> x(dim);
        for (auto& v : x) v = rng.gaussian_complex();
        const double n = vec_norm(x);
        if (n < 1e-14) continue;
        for (auto& v : x) v /= n;
        probes.push_back(std::move(x));
    }
    return probes;
}

bool is_contraction(const ComplexMatrix& t, const Params& params) {
    return op_norm(t, params.eig_tol) <= 1.0 + params.op_norm_slack;
}

} // namespace

SimilarityVerdict sznagy_isometry_test(const ComplexMatrix& t, const Params& params) {
    params.validate();
    const auto profile = power_profile(t, params.power_budget);
    if (profile.verdict != BoundednessVerdict::PowerBounded)
        fail(ErrorCode::NotPowerBounded,
             std::string("power profile verdict is ") + to_string(profile.verdict));

    const auto report = asymptotic_report(t, params);

    SimilarityVerdict verdict;
    verdict.evidence["min_spec"] = report.min_spec;
    verdict.evidence["kernel_dim"] = static_cast<double>(report.kernel_dim);
    verdict.evidence["norm_A"] = report.norm_A;
    verdict.evidence["window_spread"] = report.window_spread;

    const bool positive_definite =
        report.kernel_dim == 0 && report.window_min_eig > report.kernel_tol;
    if (!positive_definite) {
        verdict.kind = VerdictKind::NotSimilarToIsometry;
        verdict.notes["reason"] = "asymptotic limit is singular";
        return verdict;
    }

    verdict.kind = VerdictKind::SimilarToIsometry;
    const double c = std::sqrt(report.min_spec);
    verdict.certificate_c = c;
    verdict.evidence["certificate_c"] = c;

    // sampled lower-bound cross-check.  A contraction satisfies
    // ||T^n x|| >= c ||x|| directly (the orbit norms decrease to the limit);
    // a general power-bounded operator satisfies the uniform floor
    // ||T^n x|| >= sqrt(gamma/||A||) ||x||.
    const bool contraction = is_contraction(t, params);
    const double floor_expected =
        contraction ? c : std::sqrt(report.min_spec / std::max(report.norm_A, 1e-300));
    Rng rng(params.seed ^ 0x15a11ULL);
    const double floor_seen =
        sampled_orbit_floor(t, probe_set(t.dim(), rng, params.sample_count), params.decay_budget);
    verdict.evidence["sampled_orbit_floor"] = floor_seen;
    verdict.evidence["expected_orbit_floor"] = floor_expected;
    if (floor_seen < floor_expected * (1.0 - 1e-6) - 100.0 * params.tol) {
        verdict.kind = VerdictKind::Inconclusive;
        verdict.notes["reason"] = "sampled orbits dip below the certified floor";
    }
    if (contraction)
        verdict.notes["regime"] =
            "contraction input: in finite dimensions a contraction similar to an isometry is unitary";
    verdict.intertwiner = intertwiner_to_isometry(t, report.A, params);
    return verdict;
}

SimilarityVerdict sznagy_unitary_test(const ComplexMatrix& t, const Params& params) {
    params.validate();
    SimilarityVerdict verdict;

    const auto profile = power_profile(t, params.power_budget);
    verdict.evidence["sup_power_norm"] = profile.sup_estimate;
    if (profile.verdict != BoundednessVerdict::PowerBounded) {
        verdict.kind = VerdictKind::NotSimilarToIsometry;
        verdict.notes["reason"] = std::string("power profile: ") + to_string(profile.verdict);
        return verdict;
    }

    // route (ii): both limits positive definite, uniformly over window means
    const auto report_t = asymptotic_report(t, params);
    const auto report_tstar = asymptotic_report(t.adjoint(), params);
    auto pd_state = [](const AsymptoticReport& r) -> int {
        // 1 decided positive definite, 0 decided singular, -1 window-dependent
        if (r.window_min_eig > r.kernel_tol) return 1;
        if (r.window_min_eig_max <= r.kernel_tol) return 0;
        return -1;
    };
    const int pd_t = pd_state(report_t);
    const int pd_tstar = pd_state(report_tstar);
    const int route_ii = (pd_t == 1 && pd_tstar == 1) ? 1
                         : (pd_t == 0 || pd_tstar == 0) ? 0
                                                        : -1;
    verdict.evidence["min_spec_T"] = report_t.min_spec;
    verdict.evidence["min_spec_Tstar"] = report_tstar.min_spec;
    verdict.evidence["norm_A_T"] = report_t.norm_A;
    verdict.evidence["route_ii"] = route_ii;

    // route (iii): invertible with both power profiles bounded
    int route_iii = 0;
    if (is_invertible(t)) {
        const ComplexMatrix t_inv = invert(t);
        const auto profile_inv = power_profile(t_inv, params.power_budget);
        verdict.evidence["sup_power_norm_inverse"] = profile_inv.sup_estimate;
        route_iii = (profile_inv.verdict == BoundednessVerdict::PowerBounded) ? 1 : 0;
        if (profile_inv.verdict == BoundednessVerdict::Inconclusive) route_iii = -1;
    } else {
        verdict.notes["route_iii"] = "T is numerically singular";
    }
    verdict.evidence["route_iii"] = route_iii;

    if (is_contraction(t, params))
        verdict.notes["regime"] =
            "contraction input: in finite dimensions a contraction similar to a unitary is unitary";

    if (route_ii == 1 && route_iii == 1) {
        verdict.kind = VerdictKind::SimilarToUnitary;
        verdict.certificate_c = std::sqrt(report_t.min_spec);
        verdict.intertwiner = intertwiner_to_isometry(t, report_t.A, params);
        return verdict;
    }
    if (route_ii == 0 && route_iii == 0) {
        // agreed rejection: report what the isometry test has to say
        auto fallback = sznagy_isometry_test(t, params);
        fallback.evidence.insert(verdict.evidence.begin(), verdict.evidence.end());
        for (const auto& [k, v] : verdict.notes) fallback.notes.emplace(k, v);
        return fallback;
    }
    verdict.kind = VerdictKind::Inconclusive;
    verdict.notes["reason"] = "the two test routes disagree numerically";
    return verdict;
}

GammaAlternative gamma_alternative_test(const ComplexMatrix& t, const Params& params) {
    params.validate();
    const auto report = asymptotic_report(t, params);
    if (report.gamma_zero_operator)
        fail(ErrorCode::ClassC0dot, "asymptotic limit is numerically zero (class C0.)");

    GammaAlternative out;
    out.gamma = report.gamma;
    out.condition_i = report.gamma > report.kernel_tol;

    const auto kerchy = kerchy_decompose(t, report, params);
    const auto t1_verdict = sznagy_isometry_test(kerchy.t11, params);
    out.condition_ii = (t1_verdict.kind == VerdictKind::SimilarToIsometry ||
                        t1_verdict.kind == VerdictKind::SimilarToUnitary);
    out.isometry_certificate = t1_verdict.certificate_c.value_or(0.0);

    // sampled floor on H0^perp
    out.theoretical_floor = std::sqrt(report.gamma / std::max(report.norm_A, 1e-300));
    Rng rng(params.seed ^ 0x600dULL);
    std::vector<std::vector<Complex>> probes;
    const std::size_t k = kerchy.k_dim;
    const std::size_t n = t.dim();
    for (std::size_t j = k; j < n; ++j) probes.push_back(kerchy.split.basis.column(j));
    for (int s = 0; s < params.sample_count; ++s) {
        std::vector<Complex> x(n, Complex(0.0, 0.0));
        for (std::size_t j = k; j < n; ++j) {
            const Complex c = rng.gaussian_complex();
            const auto col = kerchy.split.basis.column(j);
            for (std::size_t i = 0; i < n; ++i) x[i] += c * col[i];
        }
        const double nx = vec_norm(x);
        if (nx < 1e-14) continue;
        for (auto& v : x) v /= nx;
        probes.push_back(std::move(x));
    }
    out.sampled_floor = sampled_orbit_floor(t, probes, params.decay_budget);
    out.condition_iii =
        out.sampled_floor >= out.theoretical_floor * (1.0 - 1e-6) - 100.0 * params.tol;

    out.agree = (out.condition_i == out.condition_ii) && (out.condition_ii == out.condition_iii);
    out.evidence["gamma"] = out.gamma;
    out.evidence["t1_certificate"] = out.isometry_certificate;
    out.evidence["sampled_floor"] = out.sampled_floor;
    out.evidence["theoretical_floor"] = out.theoretical_floor;
    out.evidence["kernel_dim"] = static_cast<double>(report.kernel_dim);
    return out;
}

IntertwinerCertificate intertwiner_to_isometry(const ComplexMatrix& t, const ComplexMatrix& a,
                                               const Params& params, double floor_gamma) {
    const auto eig = herm_eig(a, params.eig_tol);
    const std::size_t n = a.dim();
    const double norm_a = eig.eigenvalues.empty() ? 0.0 : std::abs(eig.eigenvalues.back());
    const double ktol = params.kernel_tol_for(norm_a);

    std::size_t rank = 0;
    double gamma = std::numeric_limits<double>::infinity();
    for (const double w : eig.eigenvalues)
        if (w > ktol) {
            ++rank;
            gamma = std::min(gamma, w);
        }
    if (rank > 0 && gamma < floor_gamma)
        fail(ErrorCode::IllConditioned,
             "retained spectrum of the limit dips to " + std::to_string(gamma));

    IntertwinerCertificate cert;
    cert.rank = rank;

    // columns of the retained eigenvectors, largest eigenvalues last in eig:
    // keep the natural ascending order of the retained part
    ComplexMatrix basis(n);
    std::vector<double> retained;
    std::size_t col = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (eig.eigenvalues[j] > ktol) {
            basis.set_column(col++, eig.eigenvectors.column(j));
            retained.push_back(eig.eigenvalues[j]);
        }
    cert.range_basis = basis;

    // X+ = D^{1/2} Vr^* (rank x n), V = D^{1/2} (Vr^* T Vr) D^{-1/2}
    ComplexMatrix xplus(n); // rank rows used
    for (std::size_t r = 0; r < rank; ++r) {
        const double s = std::sqrt(retained[r]);
        for (std::size_t j = 0; j < n; ++j) xplus(r, j) = s * std::conj(basis(j, r));
    }
    cert.xplus = xplus;

    ComplexMatrix v(rank);
    if (rank > 0) {
        ComplexMatrix compressed(rank);
        for (std::size_t r = 0; r < rank; ++r)
            for (std::size_t c = 0; c < rank; ++c) {
                Complex acc(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    Complex ti(0.0, 0.0);
                    for (std::size_t j2 = 0; j2 < n; ++j2) ti += t(i, j2) * basis(j2, c);
                    acc += std::conj(basis(i, r)) * ti;
                }
                compressed(r, c) = acc;
            }
        for (std::size_t r = 0; r < rank; ++r)
            for (std::size_t c = 0; c < rank; ++c)
                v(r, c) = std::sqrt(retained[r]) * compressed(r, c) / std::sqrt(retained[c]);
    }
    cert.v = v;

    // defects measured on the retained coordinates / on all of H
    if (rank > 0) {
        cert.isometry_defect = op_norm(v.adjoint() * v - ComplexMatrix::identity(rank), params.eig_tol);
        ComplexMatrix vx(n);
        for (std::size_t r = 0; r < rank; ++r)
            for (std::size_t j = 0; j < n; ++j) {
                Complex acc(0.0, 0.0);
                for (std::size_t c = 0; c < rank; ++c) acc += v(r, c) * xplus(c, j);
                vx(r, j) = acc;
            }
        const ComplexMatrix xt = xplus * t;
        cert.intertwine_residual = op_norm(vx - xt, params.eig_tol);
    }
    return cert;
}

InvarianceEvidence similarity_invariance_check(const ComplexMatrix& t, const ComplexMatrix& x,
                                               const Params& params) {
    params.validate();
    InvarianceEvidence out;
    out.cond_x = cond_estimate(x, params.eig_tol);
    if (!std::isfinite(out.cond_x))
        fail(ErrorCode::SingularBlock, "conjugator is numerically singular");

    const ComplexMatrix s = x * t * invert(x);
    const auto profile_s = power_profile(s, params.power_budget);
    if (profile_s.verdict == BoundednessVerdict::NotPowerBounded)
        fail(ErrorCode::NotPowerBounded, "conjugated operator lost power boundedness numerically");

    const auto report_t = asymptotic_report(t, params);
    const auto report_s = asymptotic_report(s, params);
    out.gamma_t = report_t.gamma_zero_operator ? 0.0 : report_t.gamma;
    out.gamma_s = report_s.gamma_zero_operator ? 0.0 : report_s.gamma;
    out.kernel_dim_t = report_t.kernel_dim;
    out.kernel_dim_s = report_s.kernel_dim;
    out.gamma_positive_agree =
        (out.gamma_t > report_t.kernel_tol) == (out.gamma_s > report_s.kernel_tol);
    out.kernel_dims_equal = report_t.kernel_dim == report_s.kernel_dim;
    return out;
}

ClassQResult class_q_predicate(const ComplexMatrix& t, double eig_tol) {
    const ComplexMatrix t2 = t * t;
    const ComplexMatrix form =
        (Complex(0.5, 0.0) * (t2.adjoint() * t2 + ComplexMatrix::identity(t.dim())) -
         t.adjoint() * t)
            .hermitized();
    const auto eig = herm_eig(form, eig_tol);
    ClassQResult res;
    res.min_eig = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    res.is_class_q = res.min_eig >= -eig_tol;
    if (!res.is_class_q) res.witness = eig.eigenvectors.column(0);
    return res;
}

ParanormalResult paranormal_sampled_predicate(const ComplexMatrix& t, int samples,
                                              std::uint64_t seed) {
    if (samples < 1) fail(ErrorCode::InvalidArgument, "samples must be >= 1");
    const std::size_t n = t.dim();
    Rng rng(seed);
    auto probes = probe_set(n, rng, samples);
    const auto guided = class_q_predicate(t);
    if (!guided.witness.empty()) probes.push_back(guided.witness);

    ParanormalResult res;
    res.worst_margin = -std::numeric_limits<double>::infinity();
    const double slack = 1e-12 * std::max(1.0, std::pow(op_norm(t), 2.0));
    for (const auto& x : probes) {
        const double nx = vec_norm(x);
        if (nx < 1e-14) continue;
        const auto tx = t.apply(x);
        const auto ttx = t.apply(tx);
        const double lhs = std::pow(vec_norm(tx), 2.0);
        const double rhs = vec_norm(ttx) * nx;
        const double margin = lhs - rhs;
        res.worst_margin = std::max(res.worst_margin, margin);
        if (margin > slack && res.passed) {
            res.passed = false;
            res.witness = x;
        }
    }
    return res;
}

} // namespace asymlab
