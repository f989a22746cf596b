#include "census/counting.hpp"

#include <algorithm>
#include <cmath>

namespace census {

std::vector<double> threshold_grid(double t_min, double t_max, std::size_t points, Spacing spacing) {
    if (points < 2) throw Error(ErrorCode::InvalidOptions, "grid needs at least two points");
    if (!(t_min > 0) || !(t_max > t_min)) {
        throw Error(ErrorCode::InvalidOptions, "grid needs 0 < t_min < t_max");
    }
    std::vector<double> grid(points);
    const double steps = static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) {
        const double f = static_cast<double>(j) / steps;
        grid[j] = spacing == Spacing::log ? std::exp(std::log(t_min) + f * (std::log(t_max) - std::log(t_min)))
                                          : t_min + f * (t_max - t_min);
    }
    grid.front() = t_min;
    grid.back() = t_max;
    return grid;
}

CountTable count_table(const PackingOrbit& orbit, const Region& region, std::span<const double> grid, bool force,
                       std::string region_name) {
    if (grid.empty()) throw Error(ErrorCode::InvalidOptions, "empty threshold grid");
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw Error(ErrorCode::InvalidOptions, "threshold grid must be strictly ascending");
    }
    if (grid.back() > orbit.t_max) {
        throw Error(ErrorCode::GridExceedsOrbit, "threshold " + std::to_string(grid.back()) +
                                                     " exceeds the orbit's t_max " + std::to_string(orbit.t_max));
    }
    if (!orbit.exhaustive && !force) {
        throw Error(ErrorCode::NonExhaustiveOrbit, "orbit enumeration was truncated; counts would be lower bounds");
    }

    std::vector<double> curvatures;
    for (const auto& rec : orbit.records) {
        if (region_intersects(region, to_spherical(rec.circle))) curvatures.push_back(rec.curvature);
    }
    std::sort(curvatures.begin(), curvatures.end());

    CountTable table;
    table.thresholds.assign(grid.begin(), grid.end());
    table.counts.reserve(grid.size());
    for (double t : grid) {
        const auto below = std::lower_bound(curvatures.begin(), curvatures.end(), t) - curvatures.begin();
        table.counts.push_back(static_cast<std::uint64_t>(below));
    }
    table.region = std::move(region_name);
    table.orbit_fingerprint = orbit.fingerprint;
    table.valid_to = orbit.t_max;
    table.approximate = !orbit.exhaustive;
    return table;
}

FitResult fit_exponent(const CountTable& table, double lo, double hi) {
    if (!(lo < hi)) throw Error(ErrorCode::InvalidOptions, "fit window needs lo < hi");
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < table.thresholds.size(); ++j) {
        const double t = table.thresholds[j];
        if (t < lo || t > hi || table.counts[j] == 0) continue;
        xs.push_back(std::log(t));
        ys.push_back(std::log(static_cast<double>(table.counts[j])));
    }
    if (xs.size() < 3) {
        throw Error(ErrorCode::InsufficientPoints, "fit window holds " + std::to_string(xs.size()) +
                                                       " usable points, need at least 3");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    FitResult fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.log_prefactor + fit.exponent * xs[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.point_count = static_cast<int>(xs.size());
    return fit;
}

std::vector<std::pair<double, double>> ratio_series(const CountTable& a, const CountTable& b) {
    if (a.thresholds != b.thresholds || a.counts.size() != b.counts.size()) {
        throw Error(ErrorCode::GridMismatch, "ratio_series: tables use different threshold grids");
    }
    if (a.orbit_fingerprint != 0 && b.orbit_fingerprint != 0 && a.orbit_fingerprint != b.orbit_fingerprint) {
        throw Error(ErrorCode::OrbitMismatch, "ratio_series: tables come from different orbits");
    }
    std::vector<std::pair<double, double>> out;
    for (std::size_t j = 0; j < a.thresholds.size(); ++j) {
        if (b.counts[j] == 0) continue;
        out.emplace_back(a.thresholds[j], static_cast<double>(a.counts[j]) / static_cast<double>(b.counts[j]));
    }
    return out;
}

} // namespace census
