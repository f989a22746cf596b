#include "census/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "census/config.hpp"
#include "census/io.hpp"
#include "census/verify.hpp"

namespace census::cli {

namespace {

// Failure carrying its exit status and report code.
struct Failure {
    int exit_code;
    std::string code;
    std::string message;
};

int report(std::ostream& err, const Failure& f) {
    nlohmann::json j;
    j["code"] = f.code;
    j["message"] = f.message;
    err << j.dump() << '\n';
    return f.exit_code;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::DisksNotDisjoint:
    case ErrorCode::NotTangent:
    case ErrorCode::SeedMeetsLimitSet:
        return kCheckFailed;
    case ErrorCode::NonExhaustiveOrbit:
        return kIncomplete;
    default:
        return kUsage;
    }
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{kUsage, "io-error", "cannot open " + path};
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Failure{kUsage, "io-error", "cannot write " + path};
    return out;
}

std::string require_path(const std::optional<std::string>& flag, const std::optional<std::string>& fallback,
                         const char* what) {
    if (flag) return *flag;
    if (fallback) return *fallback;
    throw Failure{kUsage, "missing-output", std::string("no output path for ") + what + " (use --out)"};
}

// --threads, then CENSUS_THREADS, then the config value.
unsigned resolve_threads(const std::optional<unsigned>& flag, unsigned from_config) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CENSUS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw Failure{kUsage, "invalid-flag", std::string("CENSUS_THREADS must be a non-negative integer, got '") + env + "'"};
    }
    return from_config;
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(text);
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_s = text.substr(0, colon), hi_s = text.substr(colon + 1);
        const double lo = std::stod(lo_s, &used_lo), hi = std::stod(hi_s, &used_hi);
        if (used_lo != lo_s.size() || used_hi != hi_s.size()) throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::exception&) {
        throw Failure{kUsage, "invalid-flag", "--window expects LO:HI, got '" + text + "'"};
    }
}

int cmd_validate(const std::string& config_path, std::ostream& out) {
    const ExperimentConfig cfg = load_config(config_path);
    Diagnostics diag;
    try {
        diag = validate_group(build_group(cfg.group, /*enforce_disjoint=*/false));
    } catch (const Error& e) {
        // Builders reject what they cannot even construct (untangent roots, seeds on the limit set).
        const std::string_view name = cfg.group.family == Family::apollonian ? checks::root_tangency
                                      : cfg.group.family == Family::modular  ? checks::seed_margin
                                                                             : checks::disk_disjointness;
        diag.checks.push_back({std::string(name), CheckStatus::fail, e.what()});
    }
    for (const auto& c : diag.checks) {
        out << status_name(c.status) << ' ' << c.name << ": " << c.message << '\n';
    }
    return diag.any_failed() ? kCheckFailed : kOk;
}

int cmd_enumerate(const std::string& config_path, const std::optional<std::string>& out_flag,
                  const std::optional<unsigned>& threads, std::ostream& out, std::ostream& err) {
    const ExperimentConfig cfg = load_config(config_path);
    const std::string path = require_path(out_flag, cfg.output.orbit, "the orbit");
    const GroupSpec spec = build_group(cfg.group);
    EnumOptions opts = cfg.enumeration;
    opts.threads = resolve_threads(threads, opts.threads);
    const PackingOrbit orbit = enumerate_orbit(spec, opts);
    {
        std::ofstream f = open_out(path);
        io::write_orbit_jsonl(f, orbit);
    }
    {
        std::ofstream f = open_out(io::meta_path_for(path));
        io::write_orbit_meta(f, orbit);
    }
    nlohmann::json summary;
    summary["records"] = orbit.records.size();
    summary["exhaustive"] = orbit.exhaustive;
    summary["certified"] = orbit.certified;
    summary["examined"] = orbit.examined;
    out << summary.dump() << '\n';
    if (!orbit.exhaustive) {
        const std::string msg = orbit.budget_exhausted ? orbit.warnings.front()
                                                       : "max_depth reached before the search finished; partial orbit written";
        return report(err, {kIncomplete, orbit.budget_exhausted ? "budget-exhausted" : "depth-limited", msg});
    }
    return kOk;
}

PackingOrbit load_orbit(const std::string& path, const ExperimentConfig& cfg) {
    PackingOrbit orbit;
    {
        std::ifstream in = open_in(path);
        orbit.records = io::read_orbit_jsonl(in);
    }
    const std::string meta = io::meta_path_for(path);
    if (std::filesystem::exists(meta)) {
        std::ifstream in = open_in(meta);
        io::read_orbit_meta(in, orbit);
        const std::uint64_t expected = orbit_fingerprint(build_group(cfg.group), cfg.enumeration.t_max);
        if (orbit.fingerprint != expected) {
            throw Failure{kUsage, "orbit-mismatch", path + " was not enumerated from this config"};
        }
    } else {
        // Without the sidecar nothing certifies completeness.
        orbit.t_max = cfg.enumeration.t_max;
        orbit.fingerprint = orbit_fingerprint(build_group(cfg.group), cfg.enumeration.t_max);
        orbit.exhaustive = false;
    }
    return orbit;
}

int cmd_count(const std::string& config_path, const std::string& orbit_path, const std::string& region_name,
              const std::optional<std::string>& out_flag, bool force, std::ostream& out) {
    const ExperimentConfig cfg = load_config(config_path);
    const auto region = cfg.regions.find(region_name);
    if (region == cfg.regions.end()) {
        throw Failure{kUsage, "unknown-region", "region '" + region_name + "' is not defined in " + config_path};
    }
    const PackingOrbit orbit = load_orbit(orbit_path, cfg);
    const auto grid = cfg.grid.thresholds();
    const CountTable table = count_table(orbit, region->second, grid, force, region_name);
    const std::optional<std::string> path = out_flag ? out_flag : cfg.output.table;
    if (path) {
        std::ofstream f = open_out(*path);
        io::write_table_csv(f, table);
    } else {
        io::write_table_csv(out, table);
    }
    return kOk;
}

CountTable load_table(const std::string& path) {
    std::ifstream in = open_in(path);
    return io::read_table_csv(in);
}

int cmd_fit(const std::string& table_path, const std::string& window, const std::optional<std::string>& out_flag,
            std::ostream& out) {
    const auto [lo, hi] = parse_window(window);
    const FitResult fit = fit_exponent(load_table(table_path), lo, hi);
    if (out_flag) {
        std::ofstream f = open_out(*out_flag);
        io::write_fit_json(f, fit);
    } else {
        io::write_fit_json(out, fit);
    }
    return kOk;
}

int cmd_ratio(const std::string& a_path, const std::string& b_path, const std::optional<std::string>& out_flag,
              std::ostream& out) {
    const auto ratios = ratio_series(load_table(a_path), load_table(b_path));
    if (out_flag) {
        std::ofstream f = open_out(*out_flag);
        io::write_ratio_csv(f, ratios);
    } else {
        io::write_ratio_csv(out, ratios);
    }
    return kOk;
}

int cmd_plot(const std::vector<std::string>& table_paths, const std::vector<std::string>& fit_paths,
             const std::string& out_path) {
    std::vector<CountTable> tables;
    std::vector<std::string> names;
    for (const auto& p : table_paths) {
        tables.push_back(load_table(p));
        names.push_back(std::filesystem::path(p).stem().string());
    }
    std::vector<FitResult> fits;
    for (const auto& p : fit_paths) {
        std::ifstream in = open_in(p);
        fits.push_back(io::read_fit_json(in));
    }
    std::ostringstream csv, overlay;
    io::emit_plot_data(tables, names, fits, csv, overlay);
    std::ofstream f = open_out(out_path);
    f << csv.str();
    std::ofstream g = open_out(out_path + ".overlays.json");
    g << overlay.str();
    return kOk;
}

int cmd_verify(const std::string& config_path, const std::optional<unsigned>& threads, std::ostream& out) {
    const ExperimentConfig cfg = load_config(config_path);
    const VerifyReport rep = verify_experiment(cfg, resolve_threads(threads, cfg.enumeration.threads));
    for (const auto& item : rep.items) {
        out << (item.passed ? "PASS " : "FAIL ") << item.name << ": " << item.detail << '\n';
    }
    out << (rep.passed() ? "verify: all checks passed" : "verify: FAILED") << '\n';
    return rep.passed() ? kOk : kCheckFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Circle packing orbit census: enumerate, count and fit circle growth"};
    app.require_subcommand(1);

    std::string config_path, orbit_path, region_name, table_path, window, a_path, b_path;
    std::optional<std::string> out_path;
    std::optional<unsigned> threads;
    std::vector<std::string> table_paths, fit_paths;
    bool force = false;

    auto* validate = app.add_subcommand("validate", "Run family-specific group diagnostics");
    validate->add_option("config", config_path, "Experiment config (JSON)")->required();

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate orbit circles below t_max to JSONL");
    enumerate->add_option("config", config_path, "Experiment config (JSON)")->required();
    enumerate->add_option("--out", out_path, "Orbit JSONL path");
    enumerate->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* count = app.add_subcommand("count", "Count orbit circles meeting a region");
    count->add_option("config", config_path, "Experiment config (JSON)")->required();
    count->add_option("--orbit", orbit_path, "Orbit JSONL path")->required();
    count->add_option("--region", region_name, "Region name from the config")->required();
    count->add_option("--out", out_path, "Count table CSV path");
    count->add_flag("--force", force, "Count a non-exhaustive orbit (result is a lower bound)");

    auto* fit = app.add_subcommand("fit", "Fit the growth exponent of a count table");
    fit->add_option("--table", table_path, "Count table CSV")->required();
    fit->add_option("--window", window, "Fit window LO:HI")->required();
    fit->add_option("--out", out_path, "Fit JSON path");

    auto* ratio = app.add_subcommand("ratio", "Pointwise ratio of two count tables");
    ratio->add_option("--a", a_path, "Numerator table CSV")->required();
    ratio->add_option("--b", b_path, "Denominator table CSV")->required();
    ratio->add_option("--out", out_path, "Ratio CSV path");

    auto* plot = app.add_subcommand("plot", "Merge count tables and fits into plot data");
    plot->add_option("--table", table_paths, "Count table CSV (repeatable)")->required();
    plot->add_option("--fit", fit_paths, "Fit JSON (repeatable)");
    plot->add_option("--out", out_path, "Plot CSV path; overlays go to <out>.overlays.json")->required();

    auto* verify = app.add_subcommand("verify", "Run the property checks relevant to a config");
    verify->add_option("config", config_path, "Experiment config (JSON)")->required();
    verify->add_option("--threads", threads, "Worker threads for the determinism check");

    std::vector<std::string> argv_store{"census"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        return report(err, {kUsage, "usage", e.what()});
    }

    try {
        if (*validate) return cmd_validate(config_path, out);
        if (*enumerate) return cmd_enumerate(config_path, out_path, threads, out, err);
        if (*count) return cmd_count(config_path, orbit_path, region_name, out_path, force, out);
        if (*fit) return cmd_fit(table_path, window, out_path, out);
        if (*ratio) return cmd_ratio(a_path, b_path, out_path, out);
        if (*plot) return cmd_plot(table_paths, fit_paths, *out_path);
        if (*verify) return cmd_verify(config_path, threads, out);
    } catch (const Failure& f) {
        return report(err, f);
    } catch (const ConfigError& e) {
        return report(err, {kUsage, "invalid-config", e.what()});
    } catch (const Error& e) {
        return report(err, {exit_code_for(e.code()), std::string(code_name(e.code())), e.what()});
    } catch (const std::exception& e) {
        return report(err, {kUsage, "internal-error", e.what()});
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace census::cli
