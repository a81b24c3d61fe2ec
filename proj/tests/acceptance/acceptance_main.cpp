// Acceptance battery runner: one pass/fail line per criterion, nonzero exit
// when any criterion fails.  --cli <path> enables the end-to-end exit-code
// checks through the real binary; --only N restricts to a single criterion.

#include <cstring>
#include <iostream>
#include <string>

#include "asymlab/suite.hpp"

int main(int argc, char** argv) {
    asymlab::SuiteOptions options;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) options.cli_path = argv[++i];
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
            options.threads = std::atoi(argv[++i]);
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    const auto results = asymlab::run_acceptance(options);
    bool all_pass = true;
    for (const auto& r : results) {
        if (only != 0 && r.index != only) continue;
        std::cout << "criterion " << r.index << " [" << r.name << "]: "
                  << (r.pass ? "PASS" : "FAIL") << " - " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "acceptance: ALL PASS" : "acceptance: FAILURES PRESENT") << "\n";
    return all_pass ? 0 : 1;
}
