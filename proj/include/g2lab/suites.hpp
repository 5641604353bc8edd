#pragma once

#include "g2lab/erp.hpp"

#include <functional>
#include <string>
#include <vector>

namespace g2lab {

/// Named verification suites shared by the command-line tool and the
/// acceptance run. Check names are prefixed with the catalog entry they
/// concern.
struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;
    double seconds = 0;
    bool passed() const { return all_pass(checks); }
};

/// erp-properties, prop-4-2, thm-4-1, thm-6-5
const std::vector<std::string>& suite_names();

/// Throws UnknownName.
SuiteResult run_suite(const std::string& name, Tolerance tol = {}, unsigned threads = 1);

/// Worker count: G2LAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_threads();

/// Runs task(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task);

} // namespace g2lab
