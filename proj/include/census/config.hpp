#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "census/counting.hpp"
#include "census/groups.hpp"
#include "census/orbit.hpp"
#include "census/region.hpp"

namespace census {

// Parse failure; `path` locates the offending value (e.g. "enumeration.t_max").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct GroupConfig {
    Family family = Family::generic;
    std::vector<DiskPair> pairs;            // schottky
    std::vector<InversiveCircle> circles;   // apollonian root, modular seed, generic seeds
    std::vector<MotionMap> generators;      // generic
};

struct GridConfig {
    double t_min = 1;
    double t_max = 0;
    std::size_t points = 64;
    Spacing spacing = Spacing::log;

    std::vector<double> thresholds() const { return threshold_grid(t_min, t_max, points, spacing); }
};

struct OutputPaths {
    std::optional<std::string> orbit, table, fit, ratio, plot;
};

struct ExperimentConfig {
    GroupConfig group;
    EnumOptions enumeration;
    std::map<std::string, Region> regions;
    GridConfig grid;
    OutputPaths output;
};

// Strict: unknown keys and out-of-range numbers are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// Builder errors (DisksNotDisjoint, NotTangent, ...) propagate as census::Error.
GroupSpec build_group(const GroupConfig& config, bool enforce_disjoint = true);

} // namespace census
