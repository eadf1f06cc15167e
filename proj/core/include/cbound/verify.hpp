#pragma once

// The acceptance criteria as executable checks. Each criterion reports its
// measured value against a fixed threshold plus structured data for reports.

#include "cbound/scenario.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace cbound {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;  ///< headline quantity compared against threshold
    double threshold = 0.0;
    std::string detail;     ///< one line, human readable
    nlohmann::json data;    ///< per-criterion measurements
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion `id` (1..10) under the scenario's numerics. Throws
/// InvalidInput for an unknown id.
CriterionResult run_criterion(int id, const Scenario& s);

/// Runs the listed criteria (all when empty), in id order.
std::vector<CriterionResult> run_acceptance(const Scenario& s, std::span<const int> ids = {});

nlohmann::json to_json(const CriterionResult& r);

/// Markdown table of results followed by the resolved scenario.
std::string acceptance_markdown(std::span<const CriterionResult> results, const nlohmann::json& scenario);

} // namespace cbound
