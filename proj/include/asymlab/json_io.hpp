#pragma once

#include <string>

#include "json.hpp"

#include "asymlab/asymptotics.hpp"
#include "asymlab/complex_matrix.hpp"
#include "asymlab/constructor.hpp"
#include "asymlab/shifts.hpp"
#include "asymlab/similarity.hpp"

namespace asymlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaTag = "asymlab/1";
inline constexpr const char* kVersion = "1.0.0";

// matrix schema: { "dim": n, "re": [n^2 reals], "im": [n^2 reals] }, row-major
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& where);

// input specs; each requires "schema": "asymlab/1"
ComplexMatrix parse_operator_spec(const Json& j);           // { "matrix": ..., ["conjugator": ...] }
ComplexMatrix parse_conjugator(const Json& j);              // optional field; identity-free check
bool has_conjugator(const Json& j);
WeightSequence parse_shift_spec(const Json& j);
ShiftSumSpec parse_sum_spec(const Json& j);
TargetSpectrum parse_target_spec(const Json& j);

Json params_to_json(const Params& p);
Params params_from_json(const Json& j, Params base);

Json report_to_json(const AsymptoticReport& report);
Json profile_to_json(const PowerProfile& profile);
Json verdict_to_json(const SimilarityVerdict& verdict);
Json gamma_alternative_to_json(const GammaAlternative& g);
Json invariance_to_json(const InvarianceEvidence& e);
Json kerchy_to_json(const KerchySplit& split);
Json shift_analysis_to_json(const ShiftAnalysis& analysis, long table_window);
Json sum_analysis_to_json(const SumAnalysis& analysis);
Json construction_to_json(const ConstructionResult& result, bool include_matrices);
Json convergence_to_json(const ConvergenceReport& report);
Json dichotomy_to_json(const DichotomyProbe& probe);

// manifest embedded in every CLI report: config echo, module versions,
// wall-clock, per-operation parameter record
Json make_manifest(const std::string& command, const Json& config_echo, const Params& params,
                   double wall_ms);

// CSV: matrices flatten column-major under an (i, j, re, im) header; scalar
// report fields flatten to key,value rows
std::string report_to_csv(const Json& report);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace asymlab
