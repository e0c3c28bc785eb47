#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wmit {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    double seconds = 0.0;
    std::optional<double> limit_seconds;
    std::vector<std::string> checks;  // one line per comparison
    std::string error;                // exception text, if one escaped
};

struct AcceptanceOptions {
    std::vector<int> only;  // empty: all twelve
    std::uint64_t seed = 20240611;
    std::ostream* progress = nullptr;  // receives each result line as it completes
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

/// "PASS  [ 4] title  (1.23 s / limit 30 s)".
std::string result_line(const CriterionResult& r);

}  // namespace wmit
