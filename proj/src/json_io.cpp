#include "asymlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "asymlab/errors.hpp"

namespace asymlab {

namespace {

void require_schema(const Json& j) {
    if (!j.is_object() || !j.contains("schema") || j["schema"] != kSchemaTag)
        fail(ErrorCode::SchemaError,
             std::string("missing or unexpected \"schema\" field (expected \"") + kSchemaTag +
                 "\")");
}

double number_at(const Json& j, const std::string& field, const std::string& where) {
    if (!j.contains(field) || !j[field].is_number())
        fail(ErrorCode::SchemaError, where + ": missing numeric field \"" + field + "\"");
    return j[field].get<double>();
}

long integer_at(const Json& j, const std::string& field, const std::string& where) {
    if (!j.contains(field) || !j[field].is_number_integer())
        fail(ErrorCode::SchemaError, where + ": missing integer field \"" + field + "\"");
    return j[field].get<long>();
}

// JSON has no infinity literal; report fields use null for it
Json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json j;
    j["dim"] = m.dim();
    std::vector<double> re, im;
    re.reserve(m.entries().size());
    im.reserve(m.entries().size());
    for (const auto& e : m.entries()) {
        re.push_back(e.real());
        im.push_back(e.imag());
    }
    j["re"] = re;
    j["im"] = im;
    return j;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(ErrorCode::SchemaError, where + ": matrix must be an object");
    const long dim = integer_at(j, "dim", where);
    if (dim < 1) fail(ErrorCode::SchemaError, where + ": dim must be >= 1");
    const auto n = static_cast<std::size_t>(dim);
    if (!j.contains("re") || !j["re"].is_array() || j["re"].size() != n * n)
        fail(ErrorCode::SchemaError, where + ": field \"re\" must hold dim^2 reals");
    if (!j.contains("im") || !j["im"].is_array() || j["im"].size() != n * n)
        fail(ErrorCode::SchemaError, where + ": field \"im\" must hold dim^2 reals");
    std::vector<Complex> entries(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        if (!j["re"][i].is_number() || !j["im"][i].is_number())
            fail(ErrorCode::SchemaError, where + ": matrix entries must be numbers");
        entries[i] = Complex(j["re"][i].get<double>(), j["im"][i].get<double>());
        if (!std::isfinite(entries[i].real()) || !std::isfinite(entries[i].imag()))
            fail(ErrorCode::SchemaError, where + ": matrix entries must be finite");
    }
    return ComplexMatrix(n, std::move(entries));
}

ComplexMatrix parse_operator_spec(const Json& j) {
    require_schema(j);
    if (!j.contains("matrix")) fail(ErrorCode::SchemaError, "operator spec: missing \"matrix\"");
    return matrix_from_json(j["matrix"], "operator spec");
}

bool has_conjugator(const Json& j) { return j.is_object() && j.contains("conjugator"); }

ComplexMatrix parse_conjugator(const Json& j) {
    return matrix_from_json(j.at("conjugator"), "conjugator");
}

namespace {

Tail parse_tail(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind"))
        fail(ErrorCode::SchemaError, where + ": tail needs a \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "constant") return Tail::constant(number_at(j, "value", where));
    if (kind == "periodic") {
        if (!j.contains("pattern") || !j["pattern"].is_array() || j["pattern"].empty())
            fail(ErrorCode::SchemaError, where + ": periodic tail needs a nonempty pattern");
        std::vector<double> pattern;
        for (const auto& v : j["pattern"]) {
            if (!v.is_number()) fail(ErrorCode::SchemaError, where + ": pattern entries must be numbers");
            pattern.push_back(v.get<double>());
        }
        return Tail::periodic(std::move(pattern));
    }
    fail(ErrorCode::SchemaError, where + ": unknown tail kind \"" + kind + "\"");
}

WeightSequence parse_shift_body(const Json& j) {
    WeightSequence w;
    w.lo = integer_at(j, "lo", "shift spec");
    w.hi = integer_at(j, "hi", "shift spec");
    if (!j.contains("core") || !j["core"].is_array())
        fail(ErrorCode::SchemaError, "shift spec: missing \"core\" array");
    for (const auto& v : j["core"]) {
        if (!v.is_number()) fail(ErrorCode::SchemaError, "shift spec: core entries must be numbers");
        w.core.push_back(v.get<double>());
    }
    if (j.contains("left_tail")) w.left = parse_tail(j["left_tail"], "shift spec left tail");
    if (j.contains("right_tail")) w.right = parse_tail(j["right_tail"], "shift spec right tail");
    w.validate();
    return w;
}

} // namespace

WeightSequence parse_shift_spec(const Json& j) {
    require_schema(j);
    return parse_shift_body(j);
}

ShiftSumSpec parse_sum_spec(const Json& j) {
    require_schema(j);
    ShiftSumSpec spec;
    if (j.contains("summands")) {
        if (!j["summands"].is_array())
            fail(ErrorCode::SchemaError, "sum spec: \"summands\" must be an array");
        for (const auto& s : j["summands"]) spec.summands.push_back(parse_shift_body(s));
    }
    if (j.contains("family")) {
        const auto& f = j["family"];
        const std::string kind = f.value("kind", "");
        const std::string dip = f.value("dip", "");
        const long count = f.value("count", 32L);
        auto rule = parse_family_rule(kind, dip, count);
        if (!rule)
            fail(ErrorCode::SchemaError,
                 "sum spec: unsupported family rule (kind \"" + kind + "\", dip \"" + dip + "\")");
        spec.family = rule;
    }
    if (spec.summands.empty() && !spec.family)
        fail(ErrorCode::SchemaError, "sum spec: needs \"summands\" or \"family\"");
    return spec;
}

TargetSpectrum parse_target_spec(const Json& j) {
    require_schema(j);
    TargetSpectrum spec;
    if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty())
        fail(ErrorCode::SchemaError, "target spec: missing nonempty \"atoms\" array");
    for (const auto& a : j["atoms"]) {
        SpectrumAtom atom;
        atom.lambda = number_at(a, "lambda", "target atom");
        if (!a.contains("mult"))
            fail(ErrorCode::SchemaError, "target atom: missing \"mult\" (integer or \"INF\")");
        if (a["mult"].is_string() && a["mult"] == "INF") {
            atom.infinite = true;
        } else if (a["mult"].is_number_integer()) {
            atom.mult = a["mult"].get<long>();
        } else {
            fail(ErrorCode::SchemaError, "target atom: \"mult\" must be an integer or \"INF\"");
        }
        spec.atoms.push_back(atom);
    }
    if (j.contains("r_under")) spec.r_under = number_at(j, "r_under", "target spec");
    spec.accumulates_at_one = j.value("accumulates_at_one", false);
    spec.accumulates_at_r_under = j.value("accumulates_at_r_under", false);
    return spec;
}

Json params_to_json(const Params& p) {
    Json j;
    j["tol"] = p.tol;
    j["eig_tol"] = p.eig_tol;
    j["kernel_tol_rel"] = p.kernel_tol_rel;
    j["power_budget"] = p.power_budget;
    j["max_iter"] = p.max_iter;
    j["decay_budget"] = p.decay_budget;
    j["decay_threshold"] = p.decay_threshold;
    j["sample_count"] = p.sample_count;
    j["seed"] = p.seed;
    j["op_norm_slack"] = p.op_norm_slack;
    return j;
}

Params params_from_json(const Json& j, Params base) {
    if (j.contains("tol")) base.tol = j["tol"].get<double>();
    if (j.contains("eig_tol")) base.eig_tol = j["eig_tol"].get<double>();
    if (j.contains("kernel_tol_rel")) base.kernel_tol_rel = j["kernel_tol_rel"].get<double>();
    if (j.contains("power_budget")) base.power_budget = j["power_budget"].get<int>();
    if (j.contains("max_iter")) base.max_iter = j["max_iter"].get<int>();
    if (j.contains("decay_budget")) base.decay_budget = j["decay_budget"].get<int>();
    if (j.contains("decay_threshold")) base.decay_threshold = j["decay_threshold"].get<double>();
    if (j.contains("sample_count")) base.sample_count = j["sample_count"].get<int>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
    base.validate();
    return base;
}

Json report_to_json(const AsymptoticReport& report) {
    Json j;
    j["mode"] = to_string(report.mode);
    j["A"] = matrix_to_json(report.A);
    j["residual"] = report.residual;
    j["residual_tol"] = report.residual_tol;
    j["window_spread"] = report.window_spread;
    j["kernel_dim"] = report.kernel_dim;
    j["gamma"] = finite_or_null(report.gamma);
    j["gamma_zero_operator"] = report.gamma_zero_operator;
    j["min_spec"] = report.min_spec;
    j["norm_A"] = report.norm_A;
    j["kernel_tol"] = report.kernel_tol;
    j["converged"] = report.converged;
    j["monotone_ok"] = report.monotone_ok;
    j["norm_floor_ok"] = report.norm_floor_ok;
    j["iterations"] = report.iterations;
    j["params"] = params_to_json(report.params);
    return j;
}

Json profile_to_json(const PowerProfile& profile) {
    Json j;
    j["verdict"] = to_string(profile.verdict);
    j["sup_estimate"] = profile.sup_estimate;
    Json norms = Json::array();
    for (const auto& [n, v] : profile.norms) norms.push_back({{"n", n}, {"norm", v}});
    j["norms"] = norms;
    if (profile.offending_exponent >= 0) j["offending_exponent"] = profile.offending_exponent;
    return j;
}

Json verdict_to_json(const SimilarityVerdict& verdict) {
    Json j;
    j["kind"] = to_string(verdict.kind);
    if (verdict.certificate_c) j["certificate_c"] = *verdict.certificate_c;
    if (verdict.intertwiner) {
        const auto& cert = *verdict.intertwiner;
        Json c;
        c["rank"] = cert.rank;
        c["isometry_defect"] = cert.isometry_defect;
        c["intertwine_residual"] = cert.intertwine_residual;
        c["V"] = matrix_to_json(cert.v);
        c["Xplus"] = matrix_to_json(cert.xplus);
        j["intertwiner"] = c;
    }
    j["evidence"] = verdict.evidence;
    j["notes"] = verdict.notes;
    return j;
}

Json gamma_alternative_to_json(const GammaAlternative& g) {
    Json j;
    j["condition_i"] = g.condition_i;
    j["condition_ii"] = g.condition_ii;
    j["condition_iii"] = g.condition_iii;
    j["agree"] = g.agree;
    j["gamma"] = g.gamma;
    j["isometry_certificate"] = g.isometry_certificate;
    j["sampled_floor"] = g.sampled_floor;
    j["theoretical_floor"] = g.theoretical_floor;
    j["evidence"] = g.evidence;
    return j;
}

Json invariance_to_json(const InvarianceEvidence& e) {
    Json j;
    j["gamma_T"] = e.gamma_t;
    j["gamma_S"] = e.gamma_s;
    j["kernel_dim_T"] = e.kernel_dim_t;
    j["kernel_dim_S"] = e.kernel_dim_s;
    j["gamma_positive_agree"] = e.gamma_positive_agree;
    j["kernel_dims_equal"] = e.kernel_dims_equal;
    j["cond_X"] = e.cond_x;
    return j;
}

Json kerchy_to_json(const KerchySplit& split) {
    Json j;
    j["stable_dim"] = split.k_dim;
    j["lower_left_norm"] = split.lower_left_norm;
    j["coupling_norm"] = split.coupling_norm;
    j["c0_block_ok"] = split.c0_block_ok;
    j["c1_block_ok"] = split.c1_block_ok;
    j["T00"] = matrix_to_json(split.t00);
    j["T11"] = matrix_to_json(split.t11);
    return j;
}

Json shift_analysis_to_json(const ShiftAnalysis& analysis, long table_window) {
    Json j;
    j["sup_prod"] = finite_or_null(analysis.bounds.sup);
    j["inf_prod"] = analysis.bounds.inf;
    j["power_bounded"] = analysis.power_bounded;
    j["similar_to_unitary"] = analysis.similar_to_unitary;
    if (analysis.has_diag_limit) {
        j["gamma"] = analysis.gamma;
        j["gamma_attained"] = analysis.gamma_attained;
        j["norm_limit"] = analysis.norm_limit;
        j["description"] = analysis.description;
        Json table = Json::array();
        for (long k = -table_window; k <= table_window; ++k)
            table.push_back({{"k", k}, {"value", analysis.diag_limit(k)}});
        j["diag_limit"] = table;
    } else {
        j["diag_limit"] = nullptr;
    }
    return j;
}

Json sum_analysis_to_json(const SumAnalysis& analysis) {
    Json j;
    j["verdict"] = to_string(analysis.verdict);
    j["sup_norm_limit"] = finite_or_null(analysis.sup_norm_limit);
    j["inf_gamma"] = analysis.inf_gamma;
    j["inf_gamma_attained"] = analysis.inf_gamma_attained;
    j["all_entries_positive"] = analysis.all_entries_positive;
    j["gamma_per_summand"] = analysis.gamma_per_summand;
    j["certificate_defect"] = analysis.certificate_defect;
    j["certificate_cond"] = analysis.certificate_cond;
    j["notes"] = analysis.notes;
    return j;
}

Json construction_to_json(const ConstructionResult& result, bool include_matrices) {
    Json j;
    j["dim"] = result.dim;
    j["window"] = result.plan.window;
    j["level_dim"] = result.plan.level_dim;
    j["r_under"] = result.plan.r_under;
    j["positive_case"] = result.plan.positive_case;
    j["nonpositive_case"] = result.plan.nonpositive_case;
    j["interior_contraction_defect"] = result.interior_contraction_defect;
    j["wrap_defect"] = result.wrap_defect;
    j["plan_log"] = result.plan.log;
    Json levels = Json::array();
    for (const auto& level : result.plan.levels) {
        Json l;
        l["k"] = level.k;
        l["values"] = level.values;
        l["pads"] = level.pad_count;
        levels.push_back(l);
    }
    j["levels"] = levels;
    Json a = Json::array();
    for (const double v : result.plan.a) a.push_back(v);
    j["a"] = a;
    if (include_matrices) {
        j["A"] = matrix_to_json(result.A);
        j["U"] = matrix_to_json(result.U);
        j["T"] = matrix_to_json(result.T);
    }
    return j;
}

Json convergence_to_json(const ConvergenceReport& report) {
    Json j;
    j["max_ratio"] = report.max_ratio;
    j["max_measured"] = report.max_measured;
    j["all_within_bound"] = report.all_within_bound;
    Json rows = Json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"k", row.k},
                        {"l", row.l},
                        {"n", row.n},
                        {"measured", row.measured},
                        {"bound", row.bound},
                        {"ratio", row.ratio}});
    j["table"] = rows;
    return j;
}

Json dichotomy_to_json(const DichotomyProbe& probe) {
    Json j;
    j["windows"] = probe.windows;
    j["kernel_dims"] = probe.kernel_dims;
    j["always_zero"] = probe.always_zero;
    j["grows"] = probe.grows;
    return j;
}

Json make_manifest(const std::string& command, const Json& config_echo, const Params& params,
                   double wall_ms) {
    Json j;
    j["schema"] = kSchemaTag;
    j["command"] = command;
    j["config"] = config_echo;
    j["versions"] = {{"asymlab", kVersion},
                     {"matrix_core", kVersion},
                     {"asymptotics", kVersion},
                     {"similarity", kVersion},
                     {"shifts", kVersion},
                     {"constructor", kVersion}};
    j["params"] = params_to_json(params);
    j["wall_clock_ms"] = wall_ms;
    return j;
}

namespace {

void csv_scalar(std::ostringstream& out, const std::string& key, const Json& v) {
    out << key << ",";
    if (v.is_null())
        out << "";
    else if (v.is_string())
        out << v.get<std::string>();
    else
        out << v.dump();
    out << "\n";
}

void csv_matrix(std::ostringstream& out, const std::string& key, const Json& m) {
    const auto dim = m["dim"].get<std::size_t>();
    out << key << "\n";
    out << "i,j,re,im\n";
    // column-major flattening
    for (std::size_t jcol = 0; jcol < dim; ++jcol)
        for (std::size_t irow = 0; irow < dim; ++irow) {
            const std::size_t flat = irow * dim + jcol;
            out << irow << "," << jcol << "," << m["re"][flat].dump() << ","
                << m["im"][flat].dump() << "\n";
        }
}

bool looks_like_matrix(const Json& v) {
    return v.is_object() && v.contains("dim") && v.contains("re") && v.contains("im");
}

void csv_walk(std::ostringstream& out, const std::string& prefix, const Json& v) {
    if (looks_like_matrix(v)) {
        csv_matrix(out, prefix, v);
        return;
    }
    if (v.is_object()) {
        for (const auto& [k, sub] : v.items())
            csv_walk(out, prefix.empty() ? k : prefix + "." + k, sub);
        return;
    }
    if (v.is_array()) {
        csv_scalar(out, prefix, Json(v.dump()));
        return;
    }
    csv_scalar(out, prefix, v);
}

} // namespace

std::string report_to_csv(const Json& report) {
    std::ostringstream out;
    out << "key,value\n";
    csv_walk(out, "", report);
    return out.str();
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::SchemaError, "cannot open input file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorCode::SchemaError, std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot open output file: " + path);
    out << content;
}

} // namespace asymlab
