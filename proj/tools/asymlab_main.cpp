#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "asymlab/errors.hpp"
#include "asymlab/json_io.hpp"
#include "asymlab/suite.hpp"

namespace {

using namespace asymlab;
using Clock = std::chrono::steady_clock;

struct CommonOptions {
    std::string input;
    std::string output;
    std::string format = "json";
    std::optional<double> tol;
    std::optional<double> kernel_tol;
    std::optional<int> power_budget;
    std::optional<std::uint64_t> seed;
    long window = 32;
    long level_dim = 4;
    long n_max = 16;
    std::string suite_name = "acceptance";
    int threads = 0;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts, bool needs_input) {
    auto* in = cmd->add_option("--input", opts.input, "input spec file (JSON)");
    if (needs_input) in->required();
    cmd->add_option("--output", opts.output, "output report path (default: stdout)");
    cmd->add_option("--format", opts.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", opts.tol, "iteration / agreement tolerance");
    cmd->add_option("--kernel-tol", opts.kernel_tol, "relative kernel threshold");
    cmd->add_option("--power-budget", opts.power_budget, "surrogate iterate budget N");
    cmd->add_option("--seed", opts.seed, "seed for sampled checks");
}

Params make_params(const CommonOptions& opts) {
    Params p;
    if (opts.tol) p.tol = *opts.tol;
    if (opts.kernel_tol) p.kernel_tol_rel = *opts.kernel_tol;
    if (opts.power_budget) p.power_budget = *opts.power_budget;
    if (opts.seed) p.seed = *opts.seed;
    p.validate();
    return p;
}

Json config_echo(const CommonOptions& opts) {
    Json j;
    j["input"] = opts.input;
    j["format"] = opts.format;
    if (opts.tol) j["tol"] = *opts.tol;
    if (opts.kernel_tol) j["kernel_tol"] = *opts.kernel_tol;
    if (opts.power_budget) j["power_budget"] = *opts.power_budget;
    if (opts.seed) j["seed"] = *opts.seed;
    return j;
}

void emit(const CommonOptions& opts, Json report) {
    std::string text =
        (opts.format == "csv") ? report_to_csv(report) : report.dump(2) + "\n";
    if (opts.output.empty())
        std::cout << text;
    else
        write_text_file(opts.output, text);
}

int run_analyze(const CommonOptions& opts) {
    const auto start = Clock::now();
    const Json spec = load_json_file(opts.input);
    const ComplexMatrix t = parse_operator_spec(spec);
    const Params params = make_params(opts);

    Json report;
    report["schema"] = kSchemaTag;
    report["command"] = "analyze";
    report["profile"] = profile_to_json(power_profile(t, params.power_budget));

    const auto asym = asymptotic_report(t, params);
    report["report"] = report_to_json(asym);
    try {
        const auto split = stable_subspace(t, asym, params);
        report["stable_dim"] = split.k_dim;
        report["kerchy"] = kerchy_to_json(kerchy_decompose_with_split(t, split, params));
    } catch (const Error& e) {
        report["stable_dim"] = nullptr;
        report["kerchy"] = nullptr;
        report["stable_subspace_note"] = e.what();
    }
    report["classification"] = to_string(classify_C(t, params));

    const double wall =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    report["manifest"] = make_manifest("analyze", config_echo(opts), params, wall);
    emit(opts, report);
    return 0;
}

int run_similarity(const CommonOptions& opts) {
    const auto start = Clock::now();
    const Json spec = load_json_file(opts.input);
    const ComplexMatrix t = parse_operator_spec(spec);
    const Params params = make_params(opts);

    Json report;
    report["schema"] = kSchemaTag;
    report["command"] = "similarity";
    report["unitary_test"] = verdict_to_json(sznagy_unitary_test(t, params));
    try {
        report["isometry_test"] = verdict_to_json(sznagy_isometry_test(t, params));
    } catch (const Error& e) {
        report["isometry_test"] = nullptr;
        report["isometry_test_note"] = e.what();
    }
    try {
        report["gamma_alternative"] = gamma_alternative_to_json(gamma_alternative_test(t, params));
    } catch (const Error& e) {
        report["gamma_alternative"] = nullptr;
        report["gamma_alternative_note"] = e.what();
    }
    report["class_Q"] = class_q_predicate(t, params.eig_tol).is_class_q;
    const auto para = paranormal_sampled_predicate(t, params.sample_count * 8, params.seed);
    report["paranormal_sampled"] = para.passed;

    if (has_conjugator(spec)) {
        const ComplexMatrix x = parse_conjugator(spec);
        report["invariance"] = invariance_to_json(similarity_invariance_check(t, x, params));
    }

    const double wall =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    report["manifest"] = make_manifest("similarity", config_echo(opts), params, wall);
    emit(opts, report);
    return 0;
}

int run_shift(const CommonOptions& opts) {
    const auto start = Clock::now();
    const Json spec = load_json_file(opts.input);
    const WeightSequence w = parse_shift_spec(spec);
    const Params params = make_params(opts);

    Json report;
    report["schema"] = kSchemaTag;
    report["command"] = "shift";
    report["analysis"] = shift_analysis_to_json(classify_shift(w), opts.window);

    const double wall =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    report["manifest"] = make_manifest("shift", config_echo(opts), params, wall);
    emit(opts, report);
    return 0;
}

int run_sum(const CommonOptions& opts) {
    const auto start = Clock::now();
    const Json spec = load_json_file(opts.input);
    const ShiftSumSpec sum_spec = parse_sum_spec(spec);
    const Params params = make_params(opts);

    Json report;
    report["schema"] = kSchemaTag;
    report["command"] = "sum";
    report["analysis"] = sum_analysis_to_json(sum_analysis(sum_spec));

    const double wall =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    report["manifest"] = make_manifest("sum", config_echo(opts), params, wall);
    emit(opts, report);
    return 0;
}

int run_construct(const CommonOptions& opts, bool include_matrices) {
    const auto start = Clock::now();
    const Json spec = load_json_file(opts.input);
    const TargetSpectrum target = parse_target_spec(spec);
    const Params params = make_params(opts);

    const auto result = construct(target, opts.window, opts.level_dim);
    const auto convergence = verify_convergence(result, opts.n_max);
    const auto probe = eigenspace_dichotomy_probe(
        target, {opts.window / 4, opts.window / 2, opts.window}, opts.level_dim);

    Json report;
    report["schema"] = kSchemaTag;
    report["command"] = "construct";
    report["construction"] = construction_to_json(result, include_matrices);
    report["convergence"] = convergence_to_json(convergence);
    report["dichotomy_probe"] = dichotomy_to_json(probe);

    const double wall =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    Json echo = config_echo(opts);
    echo["window"] = opts.window;
    echo["level_dim"] = opts.level_dim;
    echo["n_max"] = opts.n_max;
    report["manifest"] = make_manifest("construct", echo, params, wall);
    emit(opts, report);
    return 0;
}

int run_suite(const CommonOptions& opts, const std::string& self_path) {
    const auto start = Clock::now();
    const Params params = make_params(opts);
    SuiteOptions suite_opts;
    suite_opts.threads = opts.threads;
    suite_opts.cli_path = self_path;

    Json report;
    report["schema"] = kSchemaTag;
    report["command"] = "suite";
    report["suite"] = opts.suite_name;

    if (opts.suite_name == "acceptance") {
        const auto results = run_acceptance(suite_opts);
        report["criteria"] = acceptance_to_json(results);
        bool all = true;
        for (const auto& r : results) {
            std::cerr << "criterion " << r.index << " [" << r.name << "]: "
                      << (r.pass ? "PASS" : "FAIL") << " - " << r.detail << "\n";
            all = all && r.pass;
        }
        report["all_pass"] = all;
        const double wall =
            std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        report["manifest"] = make_manifest("suite", config_echo(opts), params, wall);
        emit(opts, report);
        return all ? 0 : 1;
    }
    if (opts.suite_name == "shift-crossval") {
        report["table"] = run_shift_crossval(suite_opts);
    } else if (opts.suite_name == "constructor") {
        report["table"] = run_constructor_table(suite_opts);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown suite: " + opts.suite_name);
    }
    const double wall =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    report["manifest"] = make_manifest("suite", config_echo(opts), params, wall);
    emit(opts, report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"asymlab: asymptotic limits of power-bounded operators at desk scale"};
    app.require_subcommand(1);

    CommonOptions opts;
    const std::string self_path = (argc > 0 && argv[0] != nullptr) ? argv[0] : "";

    auto* analyze = app.add_subcommand("analyze", "power profile, asymptotic limit, stable "
                                                  "splitting and classification of an operator");
    add_common_flags(analyze, opts, true);

    auto* similarity = app.add_subcommand(
        "similarity", "similarity-to-unitary and similarity-to-isometry tests with certificates");
    add_common_flags(similarity, opts, true);

    auto* shift = app.add_subcommand("shift", "closed-form weighted bilateral shift analysis");
    add_common_flags(shift, opts, true);
    shift->add_option("--window", opts.window, "diagonal table half-width");

    auto* sum = app.add_subcommand("sum", "orthogonal sums of weighted bilateral shifts");
    add_common_flags(sum, opts, true);

    auto* construct = app.add_subcommand(
        "construct", "build a contraction whose asymptotic limit matches a target spectrum");
    add_common_flags(construct, opts, true);
    construct->add_option("--window", opts.window, "partition window W");
    construct->add_option("--level-dim", opts.level_dim, "per-level expansion of INF multiplicities");
    construct->add_option("--n-max", opts.n_max, "verified power range");
    bool skip_matrices = false;
    construct->add_flag("--no-matrices", skip_matrices, "omit A, U, T from the report");

    auto* suite = app.add_subcommand("suite", "run a built-in experiment battery");
    add_common_flags(suite, opts, false);
    suite->add_option("--suite", opts.suite_name, "acceptance | shift-crossval | constructor");
    suite->add_option("--threads", opts.threads, "worker cap (default: ASYMLAB_THREADS)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(opts);
        if (similarity->parsed()) return run_similarity(opts);
        if (shift->parsed()) return run_shift(opts);
        if (sum->parsed()) return run_sum(opts);
        if (construct->parsed()) return run_construct(opts, !skip_matrices);
        if (suite->parsed()) return run_suite(opts, self_path);
    } catch (const asymlab::Error& e) {
        std::cerr << e.what() << "\n";
        return asymlab::is_rejection(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
