#pragma once

#include <string>
#include <vector>

#include "census/config.hpp"

namespace census {

struct VerifyItem {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyItem> items;

    bool passed() const;
};

// Largest t_max used by the enumeration checks; bigger configs are verified
// on their truncation at this threshold.
inline constexpr double kVerifyTMax = 100.0;

// Runs the geometric, family-specific and enumeration property checks that
// apply to the configured group.
VerifyReport verify_experiment(const ExperimentConfig& config, unsigned threads);

} // namespace census
