#include "census/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace census::io {

using nlohmann::json;

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value == 0.0 ? 0.0 : value); // no "-0"
    return buf;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used, 16);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedInput, "bad fingerprint '" + s + "'");
    }
}

json parse_json(std::istream& in, const char* what) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string(what) + ": " + e.what());
    }
}

double parse_real(const std::string& field, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line) + ": bad number '" + field + "'");
    }
}

// Rows of a two-column CSV with the given header.
std::vector<std::pair<std::string, std::string>> read_two_columns(std::istream& in, const std::string& header) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedInput, "empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw Error(ErrorCode::MalformedInput, "expected CSV header '" + header + "', got '" + line + "'");
    std::vector<std::pair<std::string, std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(lineno) + ": expected two columns");
        }
        rows.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    return rows;
}

} // namespace

void write_orbit_jsonl(std::ostream& out, const PackingOrbit& orbit) {
    for (const auto& rec : orbit.records) {
        out << "{\"a\":" << format_real(rec.circle.a()) << ",\"b_re\":" << format_real(rec.circle.b().real())
            << ",\"b_im\":" << format_real(rec.circle.b().imag()) << ",\"c\":" << format_real(rec.circle.c())
            << ",\"curv\":" << format_real(rec.curvature) << ",\"wlen\":" << rec.word_length << ",\"witness\":[";
        for (std::size_t i = 0; i < rec.witness.size(); ++i) {
            if (i) out << ',';
            out << rec.witness[i];
        }
        out << "]}\n";
    }
}

std::vector<OrbitRecord> read_orbit_jsonl(std::istream& in) {
    std::vector<OrbitRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            const InversiveCircle circle = normalize_circle(
                j.at("a").get<double>(), Complex(j.at("b_re").get<double>(), j.at("b_im").get<double>()),
                j.at("c").get<double>());
            OrbitRecord rec{circle, j.at("curv").get<double>(), j.at("wlen").get<int>(),
                            j.at("witness").get<std::vector<int>>(), 0};
            records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::MalformedInput, "orbit line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

std::string meta_path_for(const std::string& orbit_path) { return orbit_path + ".meta.json"; }

void write_orbit_meta(std::ostream& out, const PackingOrbit& orbit) {
    json j;
    j["t_max"] = orbit.t_max;
    j["fingerprint"] = hex64(orbit.fingerprint);
    j["records"] = orbit.records.size();
    j["exhaustive"] = orbit.exhaustive;
    j["certified"] = orbit.certified;
    j["budget_exhausted"] = orbit.budget_exhausted;
    j["depth_limited"] = orbit.depth_limited;
    j["examined"] = orbit.examined;
    j["warnings"] = orbit.warnings;
    out << j.dump(2) << '\n';
}

void read_orbit_meta(std::istream& in, PackingOrbit& orbit) {
    const json j = parse_json(in, "orbit meta");
    try {
        orbit.t_max = j.at("t_max").get<double>();
        orbit.fingerprint = parse_hex64(j.at("fingerprint").get<std::string>());
        orbit.exhaustive = j.at("exhaustive").get<bool>();
        orbit.certified = j.value("certified", false);
        orbit.budget_exhausted = j.value("budget_exhausted", false);
        orbit.depth_limited = j.value("depth_limited", false);
        orbit.examined = j.value("examined", std::uint64_t{0});
        orbit.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("orbit meta: ") + e.what());
    }
}

void write_table_csv(std::ostream& out, const CountTable& table) {
    out << "T,count\n";
    for (std::size_t j = 0; j < table.thresholds.size(); ++j) {
        out << format_real(table.thresholds[j]) << ',' << table.counts[j] << '\n';
    }
}

CountTable read_table_csv(std::istream& in) {
    CountTable table;
    std::size_t lineno = 1;
    for (const auto& [t, n] : read_two_columns(in, "T,count")) {
        ++lineno;
        table.thresholds.push_back(parse_real(t, lineno));
        const double count = parse_real(n, lineno);
        if (count < 0 || count != std::floor(count)) {
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(lineno) + ": count must be a non-negative integer");
        }
        table.counts.push_back(static_cast<std::uint64_t>(count));
    }
    if (!table.thresholds.empty()) table.valid_to = table.thresholds.back();
    return table;
}

void write_ratio_csv(std::ostream& out, const std::vector<std::pair<double, double>>& ratios) {
    out << "T,ratio\n";
    for (const auto& [t, r] : ratios) out << format_real(t) << ',' << format_real(r) << '\n';
}

namespace {

// Hand-written so the reals keep 17 significant digits.
std::string fit_json(const FitResult& fit) {
    std::ostringstream os;
    os << "{\"exponent\":" << format_real(fit.exponent) << ",\"log_prefactor\":" << format_real(fit.log_prefactor)
       << ",\"window\":[" << format_real(fit.window_lo) << ',' << format_real(fit.window_hi)
       << "],\"residual\":" << format_real(fit.residual) << ",\"points\":" << fit.point_count << '}';
    return os.str();
}

} // namespace

void write_fit_json(std::ostream& out, const FitResult& fit) { out << fit_json(fit) << '\n'; }

FitResult read_fit_json(std::istream& in) {
    const json j = parse_json(in, "fit");
    try {
        FitResult fit;
        fit.exponent = j.at("exponent").get<double>();
        fit.log_prefactor = j.at("log_prefactor").get<double>();
        const auto window = j.at("window").get<std::vector<double>>();
        if (window.size() != 2) throw Error(ErrorCode::MalformedInput, "fit window must have two entries");
        fit.window_lo = window[0];
        fit.window_hi = window[1];
        fit.residual = j.at("residual").get<double>();
        fit.point_count = j.at("points").get<int>();
        return fit;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("fit: ") + e.what());
    }
}

void emit_plot_data(const std::vector<CountTable>& tables, const std::vector<std::string>& names,
                    const std::vector<FitResult>& fits, std::ostream& csv_out, std::ostream& overlay_out) {
    if (tables.empty()) throw Error(ErrorCode::InvalidOptions, "plot data needs at least one table");
    if (names.size() != tables.size()) throw Error(ErrorCode::InvalidOptions, "one column name per table");
    for (const auto& t : tables) {
        if (t.thresholds != tables.front().thresholds) {
            throw Error(ErrorCode::GridMismatch, "plot tables use different threshold grids");
        }
    }
    csv_out << 'T';
    for (const auto& name : names) csv_out << ',' << name;
    csv_out << '\n';
    for (std::size_t j = 0; j < tables.front().thresholds.size(); ++j) {
        csv_out << format_real(tables.front().thresholds[j]);
        for (const auto& t : tables) csv_out << ',' << t.counts[j];
        csv_out << '\n';
    }
    overlay_out << "{\"overlays\":[";
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (i) overlay_out << ',';
        overlay_out << fit_json(fits[i]);
    }
    overlay_out << "]}\n";
}

} // namespace census::io
