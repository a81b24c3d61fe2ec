#include "asymlab/suite.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <sys/wait.h>
#include <sstream>
#include <thread>

#include "asymlab/constructor.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/rng.hpp"
#include "asymlab/shifts.hpp"
#include "asymlab/similarity.hpp"

namespace asymlab {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << v;
    return out.str();
}

// ---- seeded model generators ----------------------------------------------

// contraction mix: strict contractions, unitaries, and unitary-plus-stable
// direct sums conjugated by a random unitary.  The stable parts are scaled to
// norm <= 0.55 so that 32 powers certify orbit decay below 1e-6.
ComplexMatrix random_contraction(std::size_t dim, Rng& rng) {
    const long style = rng.integer(0, 2);
    if (style == 0) {
        ComplexMatrix g = random_ginibre(dim, rng);
        const double target = rng.uniform(0.2, 0.55);
        g *= Complex(target / std::max(op_norm(g), 1e-12), 0.0);
        return g;
    }
    if (style == 1) return random_unitary(dim, rng);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.integer(0, static_cast<long>(dim) - 1));
    const ComplexMatrix v = random_unitary(dim, rng);
    ComplexMatrix core(dim);
    const ComplexMatrix u = random_unitary(k, rng);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) core(i, j) = u(i, j);
    if (k < dim) {
        ComplexMatrix c = random_ginibre(dim - k, rng);
        const double target = rng.uniform(0.2, 0.55);
        c *= Complex(target / std::max(op_norm(c), 1e-12), 0.0);
        for (std::size_t i = 0; i < dim - k; ++i)
            for (std::size_t j = 0; j < dim - k; ++j) core(k + i, k + j) = c(i, j);
    }
    return v * core * v.adjoint();
}

// unitary with finite-order spectrum: Haar eigenbasis, eigenvalues drawn from
// the roots of unity of an order dividing 512.  The iterate sequence of any
// conjugate is then exactly periodic, and every window mean at budget 4096
// equals the true limit.
ComplexMatrix finite_order_unitary(std::size_t dim, long order, Rng& rng) {
    const ComplexMatrix basis = random_unitary(dim, rng);
    std::vector<Complex> eigs(dim);
    for (auto& e : eigs) {
        const long k = rng.integer(0, order - 1);
        e = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(order));
    }
    return basis * ComplexMatrix::diagonal(eigs) * basis.adjoint();
}

// conjugator with condition number exactly cond: Q1 D Q2 with log-uniform
// singular values pinned to [1/sqrt(cond), sqrt(cond)] at the extremes
ComplexMatrix bounded_conjugator(std::size_t dim, double cond, Rng& rng) {
    const ComplexMatrix q1 = random_unitary(dim, rng);
    const ComplexMatrix q2 = random_unitary(dim, rng);
    std::vector<double> sv(dim);
    const double hi = std::sqrt(cond), lo = 1.0 / hi;
    for (std::size_t i = 0; i < dim; ++i)
        sv[i] = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    if (dim >= 2) {
        sv[0] = lo;
        sv[1] = hi;
    }
    return q1 * ComplexMatrix::diagonal(sv) * q2;
}

struct CertificateSample {
    double defect = 0.0;
    double residual = 0.0;
};

struct Blackboard {
    std::mutex mu;
    std::vector<CertificateSample> certs; // SimilarToIsometry/Unitary certificates seen
    void add(const IntertwinerCertificate& cert) {
        std::lock_guard<std::mutex> lock(mu);
        certs.push_back({cert.isometry_defect, cert.intertwine_residual});
    }
};

// ---- criteria ---------------------------------------------------------------

CriterionResult criterion_contractions(const SuiteOptions& options, Blackboard& board) {
    const auto start = Clock::now();
    CriterionResult res{1, "contraction asymptotics", true, "", 0.0};

    const int count = 200;
    std::vector<std::string> failures(count);
    std::vector<double> worst_residual(count, 0.0);
    std::atomic<int> isometry_verdicts{0};

    parallel_for(count, options.threads, [&](std::size_t i) {
        Rng rng(0xC0DE0001ULL + 7919ULL * i);
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.integer(0, 14));
        const ComplexMatrix t = random_contraction(dim, rng);
        Params params;
        const auto report = asymptotic_limit_contraction(t, params);
        std::ostringstream problems;
        if (!report.converged) problems << "no convergence; ";
        if (report.residual > 1e-9) problems << "residual " << fmt(report.residual) << "; ";
        if (!report.monotone_ok) problems << "monotone step failed; ";
        worst_residual[i] = report.residual;

        // kernel vectors must decay within 32 powers
        const auto split = kernel_split(report.A, report.kernel_tol, params.eig_tol);
        const ComplexMatrix t32 = matrix_power(t, 32);
        for (std::size_t j = 0; j < split.k_dim; ++j) {
            const double decay = vec_norm(t32.apply(split.basis.column(j)));
            if (decay > 1e-6) {
                problems << "kernel vector " << j << " decays only to " << fmt(decay) << "; ";
                break;
            }
        }

        // isometry verdicts feed the certificate criterion
        const auto verdict = sznagy_isometry_test(t, params);
        if (verdict.kind == VerdictKind::SimilarToIsometry && verdict.intertwiner) {
            board.add(*verdict.intertwiner);
            ++isometry_verdicts;
        }
        failures[i] = problems.str();
    });

    double max_residual = 0.0;
    int failed = 0;
    for (int i = 0; i < count; ++i) {
        max_residual = std::max(max_residual, worst_residual[i]);
        if (!failures[i].empty()) {
            ++failed;
            if (res.detail.empty()) res.detail = "op " + std::to_string(i) + ": " + failures[i];
        }
    }
    res.wall_ms = ms_since(start);
    if (res.wall_ms > 10000.0) {
        res.pass = false;
        res.detail += "runtime " + fmt(res.wall_ms / 1000.0) + " s exceeds 10 s; ";
    }
    if (failed > 0) res.pass = false;
    if (res.pass)
        res.detail = "200 contractions, max residual " + fmt(max_residual) + ", " +
                     std::to_string(isometry_verdicts.load()) + " isometry certificates, " +
                     fmt(res.wall_ms / 1000.0) + " s";
    return res;
}

CriterionResult criterion_sznagy(const SuiteOptions& options, Blackboard& board) {
    const auto start = Clock::now();
    CriterionResult res{2, "Sz.-Nagy cross-validation", true, "", 0.0};

    const int count = 100;
    std::vector<std::string> failures(count);
    std::atomic<int> inconclusive{0};

    parallel_for(count, options.threads, [&](std::size_t i) {
        Rng rng(0xC0DE0002ULL + 104729ULL * i);
        const std::size_t dim = 2 + static_cast<std::size_t>(rng.integer(0, 10));
        const long orders[] = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
        const long order = orders[rng.integer(0, 9)];
        const ComplexMatrix u = finite_order_unitary(dim, order, rng);
        const ComplexMatrix x = bounded_conjugator(dim, rng.uniform(2.0, 10.0), rng);
        const ComplexMatrix t = x * u * invert(x);

        Params params; // power budget 4096
        const auto verdict = sznagy_unitary_test(t, params);
        std::ostringstream problems;
        if (verdict.kind == VerdictKind::Inconclusive) ++inconclusive;
        if (verdict.kind != VerdictKind::SimilarToUnitary)
            problems << "verdict " << to_string(verdict.kind) << "; ";
        else {
            if (verdict.evidence.at("route_ii") != 1.0 || verdict.evidence.at("route_iii") != 1.0)
                problems << "routes disagree; ";
            if (verdict.evidence.at("min_spec_T") <= 0.0) problems << "limit not positive; ";
            if (verdict.evidence.at("norm_A_T") < 1.0 - 1e-6)
                problems << "norm floor broken: " << fmt(verdict.evidence.at("norm_A_T")) << "; ";
            if (verdict.intertwiner) board.add(*verdict.intertwiner);
        }
        failures[i] = problems.str();
    });

    int failed = 0;
    for (int i = 0; i < count; ++i)
        if (!failures[i].empty()) {
            ++failed;
            if (res.detail.empty()) res.detail = "op " + std::to_string(i) + ": " + failures[i];
        }
    if (inconclusive.load() > 0) {
        res.pass = false;
        res.detail += std::to_string(inconclusive.load()) + " inconclusive verdicts; ";
    }
    if (failed > 0) res.pass = false;
    res.wall_ms = ms_since(start);
    if (res.pass)
        res.detail = "100 conjugated finite-order unitaries, all SimilarToUnitary on both "
                     "routes, zero inconclusive, " +
                     fmt(res.wall_ms / 1000.0) + " s";
    return res;
}

CriterionResult criterion_shift_oracle(const SuiteOptions&) {
    const auto start = Clock::now();
    CriterionResult res{3, "closed-form shift oracle", true, "", 0.0};

    WeightSequence w;
    w.lo = 0;
    w.hi = 1;
    w.core = {0.5};
    const auto analysis = classify_shift(w);
    std::ostringstream problems;
    if (analysis.gamma != 0.25) problems << "gamma " << analysis.gamma << " != 1/4 exactly; ";
    for (long k = -4; k <= 0; ++k)
        if (analysis.diag_limit(k) != 0.25) problems << "diag(" << k << ") != 1/4; ";
    for (long k = 1; k <= 4; ++k)
        if (analysis.diag_limit(k) != 1.0) problems << "diag(" << k << ") != 1; ";
    if (!analysis.similar_to_unitary) problems << "not similar to a unitary; ";

    // truncated surrogate: window 64, budget 32, compared on the indices that
    // are both boundary-safe (|k| <= W - budget) and budget-reachable
    // (k + budget >= hi, so the product has entered the constant tail)
    const long window = 64;
    const int budget = 32;
    const auto t = truncate_to_matrix(w, window, Boundary::Zero);
    Params params;
    params.max_iter = budget;
    const auto report = asymptotic_limit_contraction(t, params);
    double worst = 0.0;
    for (long k = -window; k <= window; ++k) {
        if (std::abs(k) > window - budget) continue;
        if (k + budget < w.hi) continue;
        const auto idx = static_cast<std::size_t>(k + window);
        worst = std::max(worst,
                         std::abs(report.A(idx, idx).real() - analysis.diag_limit(k)));
    }
    if (worst > 1e-6) problems << "surrogate deviates by " << fmt(worst) << "; ";

    res.detail = problems.str();
    res.pass = res.detail.empty();
    res.wall_ms = ms_since(start);
    if (res.pass)
        res.detail = "gamma = 1/4 exact, truncation (W=64, budget 32) interior deviation " +
                     fmt(worst);
    return res;
}

CriterionResult criterion_shift_sums(const SuiteOptions&) {
    const auto start = Clock::now();
    CriterionResult res{4, "orthogonal shift sums", true, "", 0.0};
    std::ostringstream problems;

    ShiftSumSpec dip_family;
    for (long i = 1; i <= 32; ++i) {
        WeightSequence w;
        w.lo = 0;
        w.hi = 1;
        w.core = {1.0 / static_cast<double>(i)};
        dip_family.summands.push_back(w);
    }
    dip_family.family = parse_family_rule("single_dip", "1/i", 32);
    const auto falling = sum_analysis(dip_family);
    if (falling.verdict != SumVerdict::NotSimilarToAnyNormal)
        problems << "1/i family verdict " << to_string(falling.verdict) << "; ";
    if (falling.inf_gamma != 0.0 || falling.inf_gamma_attained)
        problems << "1/i family inf gamma should be an unattained 0; ";
    if (!falling.all_entries_positive) problems << "1/i family entries must stay positive; ";

    ShiftSumSpec bounded;
    {
        WeightSequence w1;
        w1.lo = 0;
        w1.hi = 1;
        w1.core = {0.5};
        WeightSequence w2 = w1;
        w2.core = {0.6};
        bounded.summands = {w1, w2};
    }
    const auto two = sum_analysis(bounded);
    if (two.verdict != SumVerdict::SimilarToUnitary)
        problems << "two-summand verdict " << to_string(two.verdict) << "; ";
    if (two.certificate_defect > 1e-8)
        problems << "conjugation defect " << fmt(two.certificate_defect) << "; ";

    res.detail = problems.str();
    res.pass = res.detail.empty();
    res.wall_ms = ms_since(start);
    if (res.pass)
        res.detail = "1/i family: NotSimilarToAnyNormal (inf gamma -> 0); bounded dips: "
                     "SimilarToUnitary, conjugation defect " +
                     fmt(two.certificate_defect);
    return res;
}

int spawn_cli(const std::string& cli_path, const std::string& args) {
    const std::string cmd = cli_path + " " + args;
    const int raw = std::system(cmd.c_str());
    if (raw == -1) return -1;
    return WEXITSTATUS(raw);
}

CriterionResult criterion_constructor(const SuiteOptions& options) {
    const auto start = Clock::now();
    CriterionResult res{5, "constructor theorem check", true, "", 0.0};
    std::ostringstream problems;
    double worst_ratio = 0.0;

    const long window = 32;
    for (const double r : {0.25, 0.5, 0.9}) {
        for (const long d : {1L, 4L}) {
            TargetSpectrum spec;
            spec.atoms = {{r, 1, true}, {1.0, 1, true}};
            ConstructionResult result;
            try {
                result = construct(spec, window, d);
            } catch (const Error& e) {
                problems << "construct(r=" << r << ", d=" << d << ") failed: " << e.what() << "; ";
                continue;
            }
            if (max_abs_diff(result.U.adjoint() * result.U,
                             ComplexMatrix::identity(result.dim)) != 0.0)
                problems << "U not exactly unitary at r=" << r << "; ";
            const double contraction_tol = (d == 1) ? 0.0 : 1e-12;
            if (result.interior_contraction_defect > contraction_tol)
                problems << "interior contraction defect " << fmt(result.interior_contraction_defect)
                         << " at r=" << r << ", d=" << d << "; ";
            try {
                const auto conv = verify_convergence(result, 16);
                worst_ratio = std::max(worst_ratio, conv.max_ratio);
            } catch (const Error& e) {
                problems << e.what() << "; ";
            }

            const auto probe = eigenspace_dichotomy_probe(spec, {8, 16, 32}, d);
            if (!probe.grows)
                problems << "kernel probe should grow for the infinite-multiplicity target; ";
            const long step1 = probe.kernel_dims[1] - probe.kernel_dims[0];
            const long step2 = probe.kernel_dims[2] - probe.kernel_dims[1];
            if (step1 * 2 != step2) // windows 8 -> 16 -> 32: linear in W
                problems << "kernel growth is not linear in the window; ";
        }

        // multiplicity-0 companion: midpoint atoms accumulating at both ends
        TargetSpectrum midspec;
        for (long k = -window; k < window; ++k) {
            const double pk = std::pow(2.0, static_cast<double>(k));
            const double pk1 = std::pow(2.0, static_cast<double>(k + 1));
            const double ak = r + (1.0 - r) * pk / (1.0 + pk);
            const double ak1 = r + (1.0 - r) * pk1 / (1.0 + pk1);
            midspec.atoms.push_back({0.5 * (ak + ak1), 1, false});
        }
        midspec.r_under = r;
        midspec.accumulates_at_r_under = true;
        midspec.accumulates_at_one = true;
        const auto zero_probe = eigenspace_dichotomy_probe(midspec, {8, 16, 32}, 1);
        if (!zero_probe.always_zero)
            problems << "multiplicity-0 target shows a nonzero kernel; ";
    }

    // the excluded finite-multiplicity case must be rejected, end to end when
    // the CLI is available
    TargetSpectrum rejected;
    rejected.atoms = {{0.25, 3, false}, {1.0, 1, true}};
    bool rejected_ok = false;
    try {
        validate_target(rejected);
    } catch (const Error& e) {
        rejected_ok = (e.code() == ErrorCode::HypothesisViolation) && is_rejection(e.code());
    }
    if (!rejected_ok) problems << "finite-multiplicity target was not rejected; ";

    if (!options.cli_path.empty()) {
        namespace fs = std::filesystem;
        const auto dir = fs::temp_directory_path() / "asymlab_suite";
        fs::create_directories(dir);
        const auto spec_path = (dir / "rejected_target.json").string();
        Json j;
        j["schema"] = kSchemaTag;
        j["atoms"] = Json::array({{{"lambda", 0.25}, {"mult", 3}}, {{"lambda", 1.0}, {"mult", "INF"}}});
        write_text_file(spec_path, j.dump(2));
        const int code = spawn_cli(options.cli_path,
                                   "construct --input " + spec_path + " --output " +
                                       (dir / "rejected_out.json").string() + " 2>/dev/null");
        if (code != 2) problems << "CLI exit code " << code << " != 2 for the rejected target; ";
    }

    res.detail = problems.str();
    res.pass = res.detail.empty();
    res.wall_ms = ms_since(start);
    if (res.wall_ms > 30000.0) {
        res.pass = false;
        res.detail += "runtime " + fmt(res.wall_ms / 1000.0) + " s exceeds 30 s; ";
    }
    if (res.pass)
        res.detail = "grid {1/4, 1/2, 0.9} x {d=1, d=4}: exact unitary U, interior "
                     "contraction exact, max bound ratio " +
                     fmt(worst_ratio) + ", dichotomy probes consistent, rejection exits 2";
    return res;
}

CriterionResult criterion_intertwiners(const SuiteOptions&, Blackboard& board) {
    const auto start = Clock::now();
    CriterionResult res{6, "intertwiner certificates", true, "", 0.0};
    std::lock_guard<std::mutex> lock(board.mu);
    double worst_defect = 0.0, worst_residual = 0.0;
    for (const auto& cert : board.certs) {
        worst_defect = std::max(worst_defect, cert.defect);
        worst_residual = std::max(worst_residual, cert.residual);
    }
    std::ostringstream problems;
    if (board.certs.empty()) problems << "no certificates were produced by criteria 1-2; ";
    if (worst_defect > 1e-8) problems << "isometry defect " << fmt(worst_defect) << " > 1e-8; ";
    if (worst_residual > 1e-8)
        problems << "intertwining residual " << fmt(worst_residual) << " > 1e-8; ";
    res.detail = problems.str();
    res.pass = res.detail.empty();
    res.wall_ms = ms_since(start);
    if (res.pass)
        res.detail = std::to_string(board.certs.size()) + " certificates, max defect " +
                     fmt(worst_defect) + ", max residual " + fmt(worst_residual);
    return res;
}

CriterionResult criterion_block_inverse(const SuiteOptions& options) {
    const auto start = Clock::now();
    CriterionResult res{7, "structured block inverse", true, "", 0.0};

    const int count = 500;
    std::vector<double> rel_err(count, 0.0);
    std::vector<std::string> failures(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        Rng rng(0xC0DE0007ULL + 613ULL * i);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 8));
        const std::size_t k = 1 + static_cast<std::size_t>(rng.integer(0, static_cast<long>(n) - 2 >= 0 ? static_cast<long>(n) - 2 : 0));
        const ComplexMatrix basis = random_unitary(n, rng);
        ComplexMatrix y(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                if (r >= k && c < k) continue;
                y(r, c) = rng.uniform(0.2, 1.0) * rng.gaussian_complex();
            }
            // diagonal dominance keeps the blocks invertible while the
            // conditioning still spreads over a few orders of magnitude
            y(r, r) += Complex(rng.uniform(0.8, 6.0), 0.0);
        }
        const ComplexMatrix x = basis * y * basis.adjoint();
        const double cond = cond_estimate(x);
        if (cond > 1e4) {
            failures[i] = "generator produced cond " + fmt(cond);
            return;
        }
        try {
            const BlockSplit split{k, basis};
            const ComplexMatrix via_blocks = block_upper_inverse(x, split, 1e-7);
            const ComplexMatrix direct = invert(x);
            const double err = (via_blocks - direct).frobenius_norm();
            rel_err[i] = err / cond;
            if (err > 1e-10 * cond)
                failures[i] = "error " + fmt(err) + " at cond " + fmt(cond);
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });

    double worst = 0.0;
    int failed = 0;
    for (int i = 0; i < count; ++i) {
        worst = std::max(worst, rel_err[i]);
        if (!failures[i].empty()) {
            ++failed;
            if (res.detail.empty()) res.detail = "case " + std::to_string(i) + ": " + failures[i];
        }
    }
    if (failed > 0) res.pass = false;
    res.wall_ms = ms_since(start);
    if (res.pass)
        res.detail = "500 random block-triangular inverses, max error/cond " + fmt(worst);
    return res;
}

CriterionResult criterion_class_predicates(const SuiteOptions& options) {
    const auto start = Clock::now();
    CriterionResult res{8, "class predicates", true, "", 0.0};

    const int count = 50;
    std::vector<std::string> failures(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        Rng rng(0xC0DE0008ULL + 31ULL * i);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.integer(0, 6));
        ComplexMatrix t = random_ginibre(n, rng);
        t *= Complex(rng.uniform(0.4, 1.4) / std::max(op_norm(t), 1e-12), 0.0);

        const auto q = class_q_predicate(t);
        const ComplexMatrix t2 = t * t;
        const ComplexMatrix form =
            (Complex(0.5, 0.0) * (t2.adjoint() * t2 + ComplexMatrix::identity(n)) - t.adjoint() * t)
                .hermitized();

        // 1e5 random quadratic-form samples
        double sampled_min = std::numeric_limits<double>::infinity();
        std::vector<Complex> x(n);
        for (int s = 0; s < 100000; ++s) {
            double norm2 = 0.0;
            for (auto& v : x) {
                v = rng.gaussian_complex();
                norm2 += std::norm(v);
            }
            const double val = vec_dot(x, form.apply(x)).real() / norm2;
            sampled_min = std::min(sampled_min, val);
        }
        if (q.is_class_q && sampled_min < -1e-10)
            failures[i] = "PSD test passed but sampling found " + fmt(sampled_min);
        if (!q.is_class_q) {
            // the minimizing eigendirection must expose the violation
            const double val = vec_dot(q.witness, form.apply(q.witness)).real();
            if (val > -1e-12) failures[i] = "witness does not certify the failure";
        }
    });

    std::ostringstream problems;
    for (int i = 0; i < count; ++i)
        if (!failures[i].empty()) {
            problems << "matrix " << i << ": " << failures[i] << "; ";
            break;
        }

    // the nilpotent worked example fails with the analytic witness e2
    const auto nil = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
    if (class_q_predicate(nil).is_class_q) problems << "nilpotent passed the class-Q test; ";
    const auto para = paranormal_sampled_predicate(nil, 1024, 99);
    if (para.passed) problems << "nilpotent passed the paranormal sampling; ";
    if (para.witness.size() != 2 || std::abs(std::abs(para.witness[1]) - 1.0) > 1e-6)
        problems << "paranormal witness is not e2; ";

    res.detail = problems.str();
    res.pass = res.detail.empty();
    res.wall_ms = ms_since(start);
    if (res.pass)
        res.detail = "50 matrices x 1e5 samples agree with the PSD form test; nilpotent fails "
                     "with witness e2";
    return res;
}

} // namespace

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ASYMLAB_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 2;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<int>(worker_count(threads), static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options) {
    Blackboard board;
    std::vector<CriterionResult> results;
    results.push_back(criterion_contractions(options, board));
    results.push_back(criterion_sznagy(options, board));
    results.push_back(criterion_shift_oracle(options));
    results.push_back(criterion_shift_sums(options));
    results.push_back(criterion_constructor(options));
    results.push_back(criterion_intertwiners(options, board));
    results.push_back(criterion_block_inverse(options));
    results.push_back(criterion_class_predicates(options));
    std::sort(results.begin(), results.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.index < b.index; });
    return results;
}

Json acceptance_to_json(const std::vector<CriterionResult>& results) {
    Json j = Json::array();
    for (const auto& r : results)
        j.push_back({{"criterion", r.index},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"detail", r.detail},
                     {"wall_ms", r.wall_ms}});
    return j;
}

Json run_shift_crossval(const SuiteOptions&) {
    Json out = Json::array();
    WeightSequence w;
    w.lo = 0;
    w.hi = 1;
    w.core = {0.5};
    const auto analysis = classify_shift(w);
    for (const long window : {16L, 32L, 64L}) {
        const int budget = static_cast<int>(window / 2);
        const auto t = truncate_to_matrix(w, window, Boundary::Zero);
        Params params;
        params.max_iter = budget;
        const auto report = asymptotic_limit_contraction(t, params);
        double worst = 0.0;
        long compared = 0;
        for (long k = -window; k <= window; ++k) {
            if (std::abs(k) > window - budget) continue;
            if (k + budget < w.hi) continue;
            const auto idx = static_cast<std::size_t>(k + window);
            worst = std::max(worst, std::abs(report.A(idx, idx).real() - analysis.diag_limit(k)));
            ++compared;
        }
        out.push_back({{"window", window},
                       {"budget", budget},
                       {"interior_indices", compared},
                       {"max_deviation", worst}});
    }
    return out;
}

Json run_constructor_table(const SuiteOptions&) {
    Json out = Json::array();
    for (const double r : {0.25, 0.5, 0.9}) {
        for (const long d : {1L, 4L}) {
            TargetSpectrum spec;
            spec.atoms = {{r, 1, true}, {1.0, 1, true}};
            const auto result = construct(spec, 16, d);
            const auto conv = verify_convergence(result, 8);
            out.push_back({{"r_under", r},
                           {"level_dim", d},
                           {"dim", result.dim},
                           {"max_ratio", conv.max_ratio},
                           {"max_measured", conv.max_measured},
                           {"rows", conv.rows.size()},
                           {"wrap_defect", result.wrap_defect}});
        }
    }
    return out;
}

} // namespace asymlab
