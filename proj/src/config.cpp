#include "census/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace census {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    expect_object(j, path);
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(join(path, key), "unknown key");
        }
    }
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
    return j.at(key);
}

double real(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
}

double positive(const json& j, const std::string& path) {
    const double v = real(j, path);
    if (!(v > 0)) throw ConfigError(path, "must be > 0");
    return v;
}

std::int64_t integer(const json& j, const std::string& path, std::int64_t min) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = j.get<std::int64_t>();
    if (v < min) throw ConfigError(path, "must be >= " + std::to_string(min));
    return v;
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

Complex complex_value(const json& j, const std::string& path) {
    if (j.is_number()) return {real(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a number or [re, im]");
    return {real(j[0], index(path, 0)), real(j[1], index(path, 1))};
}

Disk disk(const json& j, const std::string& path) {
    only_keys(j, path, {"center", "radius"});
    return {complex_value(require(j, "center", path), join(path, "center")),
            positive(require(j, "radius", path), join(path, "radius"))};
}

InversiveCircle circle(const json& j, const std::string& path) {
    expect_object(j, path);
    try {
        if (j.contains("center") || j.contains("radius")) {
            const Disk d = disk(j, path);
            return d.boundary();
        }
        only_keys(j, path, {"a", "b", "c"});
        return normalize_circle(real(require(j, "a", path), join(path, "a")),
                                complex_value(require(j, "b", path), join(path, "b")),
                                real(require(j, "c", path), join(path, "c")));
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

MotionMap motion_map(const json& j, const std::string& path) {
    only_keys(j, path, {"matrix", "anticonformal"});
    const json& m = require(j, "matrix", path);
    const std::string mpath = join(path, "matrix");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() ||
        m[1].size() != 2) {
        throw ConfigError(mpath, "expected a 2x2 array");
    }
    const Mat2 mat{complex_value(m[0][0], index(index(mpath, 0), 0)), complex_value(m[0][1], index(index(mpath, 0), 1)),
                   complex_value(m[1][0], index(index(mpath, 1), 0)), complex_value(m[1][1], index(index(mpath, 1), 1))};
    bool anti = false;
    if (j.contains("anticonformal")) {
        if (!j.at("anticonformal").is_boolean()) throw ConfigError(join(path, "anticonformal"), "expected a boolean");
        anti = j.at("anticonformal").get<bool>();
    }
    try {
        return MotionMap(mat, anti ? Orientation::anticonformal : Orientation::conformal);
    } catch (const Error& e) {
        throw ConfigError(mpath, e.what());
    }
}

std::vector<InversiveCircle> circle_list(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of circles");
    std::vector<InversiveCircle> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(circle(j[i], index(path, i)));
    return out;
}

GroupConfig group(const json& j, const std::string& path) {
    expect_object(j, path);
    const std::string type = text(require(j, "type", path), join(path, "type"));
    GroupConfig g;
    if (type == "schottky") {
        only_keys(j, path, {"type", "pairs"});
        g.family = Family::schottky;
        const json& pairs = require(j, "pairs", path);
        const std::string ppath = join(path, "pairs");
        if (!pairs.is_array() || pairs.empty()) throw ConfigError(ppath, "expected a non-empty array of disk pairs");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const std::string ip = index(ppath, i);
            only_keys(pairs[i], ip, {"source", "target"});
            g.pairs.push_back({disk(require(pairs[i], "source", ip), join(ip, "source")),
                               disk(require(pairs[i], "target", ip), join(ip, "target"))});
        }
    } else if (type == "apollonian") {
        only_keys(j, path, {"type", "root"});
        g.family = Family::apollonian;
        g.circles = circle_list(require(j, "root", path), join(path, "root"));
        if (g.circles.size() != 4) throw ConfigError(join(path, "root"), "expected exactly four circles");
    } else if (type == "modular") {
        only_keys(j, path, {"type", "seed"});
        g.family = Family::modular;
        g.circles.push_back(circle(require(j, "seed", path), join(path, "seed")));
    } else if (type == "generic") {
        only_keys(j, path, {"type", "generators", "seeds"});
        g.family = Family::generic;
        const json& gens = require(j, "generators", path);
        const std::string gpath = join(path, "generators");
        if (!gens.is_array() || gens.empty()) throw ConfigError(gpath, "expected a non-empty array of maps");
        for (std::size_t i = 0; i < gens.size(); ++i) g.generators.push_back(motion_map(gens[i], index(gpath, i)));
        g.circles = circle_list(require(j, "seeds", path), join(path, "seeds"));
    } else {
        throw ConfigError(join(path, "type"), "expected one of schottky, apollonian, modular, generic");
    }
    return g;
}

PruningMode pruning_mode(const json& j, const std::string& path) {
    const std::string s = text(j, path);
    if (s == "auto") return PruningMode::automatic;
    if (s == "certified") return PruningMode::certified;
    if (s == "slack") return PruningMode::slack;
    if (s == "none") return PruningMode::none;
    throw ConfigError(path, "expected one of auto, certified, slack, none");
}

EnumOptions enumeration(const json& j, const std::string& path) {
    only_keys(j, path, {"t_max", "budget", "slack_depth", "dedup_eps", "pruning", "max_depth", "threads"});
    EnumOptions o;
    o.t_max = positive(require(j, "t_max", path), join(path, "t_max"));
    if (j.contains("budget")) o.budget = static_cast<std::uint64_t>(integer(j.at("budget"), join(path, "budget"), 1));
    if (j.contains("slack_depth")) {
        o.slack_depth = static_cast<int>(integer(j.at("slack_depth"), join(path, "slack_depth"), 0));
    }
    if (j.contains("dedup_eps")) o.dedup_quantum = positive(j.at("dedup_eps"), join(path, "dedup_eps"));
    if (j.contains("pruning")) o.pruning = pruning_mode(j.at("pruning"), join(path, "pruning"));
    if (j.contains("max_depth")) o.max_depth = static_cast<int>(integer(j.at("max_depth"), join(path, "max_depth"), 0));
    if (j.contains("threads")) o.threads = static_cast<unsigned>(integer(j.at("threads"), join(path, "threads"), 0));
    return o;
}

Vec3 vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected [x, y, z]");
    const Vec3 v{real(j[0], index(path, 0)), real(j[1], index(path, 1)), real(j[2], index(path, 2))};
    if (!(v.norm() > 0)) throw ConfigError(path, "must be non-zero");
    return v;
}

Region region(const json& j, const std::string& path) {
    expect_object(j, path);
    if (j.size() != 1) throw ConfigError(path, "expected exactly one of cap, complement, union, full");
    const auto it = j.begin();
    const std::string key = it.key();
    const json& value = it.value();
    const std::string sub = join(path, key);
    if (key == "full") {
        if (!value.is_boolean() || !value.get<bool>()) throw ConfigError(sub, "expected true");
        return Region::full();
    }
    if (key == "cap") {
        only_keys(value, sub, {"center", "radius"});
        const Vec3 center = vec3(require(value, "center", sub), join(sub, "center"));
        const double radius = real(require(value, "radius", sub), join(sub, "radius"));
        if (!(radius > 0 && radius < std::numbers::pi)) throw ConfigError(join(sub, "radius"), "must lie in (0, pi)");
        return Region::cap(center, radius);
    }
    if (key == "complement") return Region::complement(region(value, sub));
    if (key == "union") {
        if (!value.is_array() || value.empty()) throw ConfigError(sub, "expected a non-empty array of regions");
        std::vector<Region> parts;
        for (std::size_t i = 0; i < value.size(); ++i) parts.push_back(region(value[i], index(sub, i)));
        return Region::union_of(std::move(parts));
    }
    throw ConfigError(sub, "unknown region kind");
}

GridConfig grid(const json* j, const std::string& path, double enum_t_max) {
    GridConfig g;
    g.t_max = enum_t_max;
    g.t_min = enum_t_max > 1 ? 1.0 : enum_t_max / 100.0;
    if (j != nullptr) {
        only_keys(*j, path, {"t_min", "t_max", "points", "spacing"});
        if (j->contains("t_min")) g.t_min = positive(j->at("t_min"), join(path, "t_min"));
        if (j->contains("t_max")) g.t_max = positive(j->at("t_max"), join(path, "t_max"));
        if (j->contains("points")) g.points = static_cast<std::size_t>(integer(j->at("points"), join(path, "points"), 2));
        if (j->contains("spacing")) {
            const std::string s = text(j->at("spacing"), join(path, "spacing"));
            if (s == "log") g.spacing = Spacing::log;
            else if (s == "linear") g.spacing = Spacing::linear;
            else throw ConfigError(join(path, "spacing"), "expected log or linear");
        }
    }
    if (!(g.t_min < g.t_max)) throw ConfigError(join(path, "t_min"), "must be < grid t_max");
    if (g.t_max > enum_t_max) throw ConfigError(join(path, "t_max"), "must not exceed enumeration.t_max");
    return g;
}

std::optional<std::string> optional_path(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) return std::nullopt;
    return text(j.at(key), join(path, key));
}

} // namespace

ExperimentConfig parse_config(const json& doc) {
    only_keys(doc, "", {"group", "enumeration", "regions", "grid", "output"});
    ExperimentConfig cfg;
    cfg.group = group(require(doc, "group", ""), "group");
    cfg.enumeration = enumeration(require(doc, "enumeration", ""), "enumeration");
    if (doc.contains("regions")) {
        const json& regions = doc.at("regions");
        expect_object(regions, "regions");
        for (const auto& [name, expr] : regions.items()) cfg.regions.emplace(name, region(expr, join("regions", name)));
    }
    cfg.grid = grid(doc.contains("grid") ? &doc.at("grid") : nullptr, "grid", cfg.enumeration.t_max);
    if (doc.contains("output")) {
        const json& out = doc.at("output");
        only_keys(out, "output", {"orbit", "table", "fit", "ratio", "plot"});
        cfg.output.orbit = optional_path(out, "orbit", "output");
        cfg.output.table = optional_path(out, "table", "output");
        cfg.output.fit = optional_path(out, "fit", "output");
        cfg.output.ratio = optional_path(out, "ratio", "output");
        cfg.output.plot = optional_path(out, "plot", "output");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

GroupSpec build_group(const GroupConfig& config, bool enforce_disjoint) {
    switch (config.family) {
    case Family::schottky:
        return schottky_from_disk_pairs(config.pairs, enforce_disjoint);
    case Family::apollonian: {
        if (config.circles.size() != 4) throw Error(ErrorCode::InvalidOptions, "apollonian root needs four circles");
        return apollonian_from_root({config.circles[0], config.circles[1], config.circles[2], config.circles[3]});
    }
    case Family::modular:
        return modular_group(config.circles.at(0));
    case Family::generic:
        return generic_group(config.generators, config.circles);
    }
    throw Error(ErrorCode::InvalidOptions, "unknown group family");
}

} // namespace census
