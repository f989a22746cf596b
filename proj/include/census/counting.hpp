#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "census/orbit.hpp"
#include "census/region.hpp"

namespace census {

// Cumulative counts N(T) = #{records : circle meets E, curvature < T}.
struct CountTable {
    std::vector<double> thresholds;
    std::vector<std::uint64_t> counts;
    std::string region;
    std::uint64_t orbit_fingerprint = 0; // 0 when unknown (e.g. read back from CSV)
    double valid_to = 0;
    bool approximate = false; // counted from a non-exhaustive orbit
};

struct FitResult {
    double exponent = 0;
    double log_prefactor = 0;
    double window_lo = 0;
    double window_hi = 0;
    double residual = 0; // rms of the log-log fit
    int point_count = 0;
};

enum class Spacing { log, linear };

// `points` thresholds from t_min to t_max inclusive; the last one is t_max
// exactly.
std::vector<double> threshold_grid(double t_min, double t_max, std::size_t points, Spacing spacing = Spacing::log);

// Throws GridExceedsOrbit when a threshold passes the orbit's t_max, and
// NonExhaustiveOrbit for truncated orbits unless forced.
CountTable count_table(const PackingOrbit& orbit, const Region& region, std::span<const double> grid,
                       bool force = false, std::string region_name = {});

// Ordinary least squares of log N against log T over thresholds in
// [lo, hi] with N > 0. Throws InsufficientPoints below three points.
FitResult fit_exponent(const CountTable& table, double lo, double hi);

// Pointwise N_A / N_B over the shared grid, skipping N_B = 0.
std::vector<std::pair<double, double>> ratio_series(const CountTable& a, const CountTable& b);

} // namespace census
