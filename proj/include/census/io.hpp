#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "census/counting.hpp"
#include "census/orbit.hpp"

// File formats. Every real number is written with 17 significant digits so
// that re-parsing reproduces the double exactly.
//
//   orbit      JSONL, one record per line:
//              {"a":..,"b_re":..,"b_im":..,"c":..,"curv":..,"wlen":..,"witness":[..]}
//   orbit meta JSON sidecar "<orbit>.meta.json" with t_max, flags, fingerprint
//   table      CSV "T,count"
//   ratio      CSV "T,ratio"
//   fit        JSON {"exponent","log_prefactor","window":[lo,hi],"residual","points"}
namespace census::io {

std::string format_real(double value);

void write_orbit_jsonl(std::ostream& out, const PackingOrbit& orbit);
// Records only; the sidecar carries the orbit-level fields.
std::vector<OrbitRecord> read_orbit_jsonl(std::istream& in);

std::string meta_path_for(const std::string& orbit_path);
void write_orbit_meta(std::ostream& out, const PackingOrbit& orbit);
// Fills t_max, fingerprint and flags of `orbit` from a sidecar document.
void read_orbit_meta(std::istream& in, PackingOrbit& orbit);

void write_table_csv(std::ostream& out, const CountTable& table);
CountTable read_table_csv(std::istream& in);

void write_ratio_csv(std::ostream& out, const std::vector<std::pair<double, double>>& ratios);

void write_fit_json(std::ostream& out, const FitResult& fit);
FitResult read_fit_json(std::istream& in);

// One CSV with a T column and one count column per table (in order), plus a
// JSON sidecar listing the fitted power laws as overlays. Throws
// GridMismatch unless all tables share a grid.
void emit_plot_data(const std::vector<CountTable>& tables, const std::vector<std::string>& names,
                    const std::vector<FitResult>& fits, std::ostream& csv_out, std::ostream& overlay_out);

} // namespace census::io
