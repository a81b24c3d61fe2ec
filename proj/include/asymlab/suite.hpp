#pragma once

#include <functional>
#include <string>
#include <vector>

#include "asymlab/json_io.hpp"

namespace asymlab {

struct SuiteOptions {
    std::string cli_path; // enables the end-to-end exit-code check when set
    int threads = 0;      // 0: ASYMLAB_THREADS, falling back to the hardware count
};

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double wall_ms = 0.0;
};

// The acceptance battery.  Every tolerance is pinned in the implementation;
// each criterion reports one pass/fail line with its measured extremes.
std::vector<CriterionResult> run_acceptance(const SuiteOptions& options);

Json acceptance_to_json(const std::vector<CriterionResult>& results);

// |windowed surrogate - closed form| per truncation window for the worked
// shift examples
Json run_shift_crossval(const SuiteOptions& options);

// convergence-bound ratio table over the constructor grid
Json run_constructor_table(const SuiteOptions& options);

// bounded worker pool; results must be slotted by index by the caller
int worker_count(int requested);
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace asymlab
