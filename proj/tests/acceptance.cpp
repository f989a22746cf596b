// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "census/counting.hpp"
#include "census/groups.hpp"
#include "census/io.hpp"
#include "census/orbit.hpp"
#include "census/region.hpp"
#include "oracle.hpp"

using namespace census;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool passed;
    std::string detail;
};

const std::vector<DiskPair> kGenus2{{{-2.0, 1.0}, {2.0, 1.0}}, {{Complex(0, -2), 1.0}, {Complex(0, 2), 1.0}}};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

EnumOptions opts(double t_max, unsigned threads = 0) {
    EnumOptions o;
    o.t_max = t_max;
    o.threads = threads;
    return o;
}

struct KeyLess {
    bool operator()(const CanonicalKey& x, const CanonicalKey& y) const { return x.cells < y.cells; }
};
using KeyMap = std::map<CanonicalKey, int, KeyLess>;

KeyMap keys_of(const PackingOrbit& orbit) {
    KeyMap out;
    for (const auto& r : orbit.records) out.emplace(canonical_key(r.circle), r.word_length);
    return out;
}

// 1
Outcome curvature_identities() {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<InversiveCircle> circles;
    while (circles.size() < 10000) {
        const double a = u(rng), c = u(rng);
        const Complex b(u(rng), u(rng));
        if (std::norm(b) - a * c > 1e-6) circles.push_back(normalize_circle(a, b, c));
    }
    const auto start = Clock::now();
    double worst = 0;
    for (const auto& c : circles) {
        const double k = std::abs(c.a() + c.c()) / 2;
        const double cot = 1 / std::tan(to_spherical(c).theta);
        const double sh = std::sinh(hyperbolic_distance_to_center(c));
        const double scale = std::max(1.0, k);
        worst = std::max({worst, std::abs(k - cot) / scale, std::abs(k - sh) / scale, std::abs(cot - sh) / scale,
                          std::abs(spherical_curvature(c) - k) / scale});
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {worst <= 1e-9 && secs < 1.0,
            "10000 circles, worst gap " + fmt("%.2e", worst) + ", " + fmt("%.3f", secs) + " s"};
}

// 2
Outcome action_oracle() {
    std::mt19937_64 rng(2002);
    const auto start = Clock::now();
    int bad = 0, anti = 0;
    for (int i = 0; i < 200; ++i) {
        const oracle::PointMap g = oracle::random_map(rng);
        anti += g.anti;
        const InversiveCircle c = oracle::random_circle(rng);
        const InversiveCircle want = oracle::to_inversive(oracle::image(g, oracle::to_plane(c)));
        if (!oracle::same_circle(apply_map_circle(g.motion(), c), want, 1e-9)) ++bad;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {bad == 0 && anti > 0 && secs < 1.0, std::to_string(200 - bad) + "/200 agree (" + std::to_string(anti) +
                                                    " anticonformal), " + fmt("%.3f", secs) + " s"};
}

// Reduced words of the genus-2 group by point maps, for the brute-force oracle.
oracle::PointMap letter_map(int letter) {
    const DiskPair& p = kGenus2[std::abs(letter) - 1];
    const Complex c = p.source.center, c2 = p.target.center;
    const oracle::PointMap g{c2, p.source.radius * p.target.radius - c * c2, 1.0, -c};
    return letter > 0 ? g : oracle::PointMap{g.d, -g.b, -g.c, g.a};
}

// 3
Outcome brute_force_equivalence() {
    const auto start = Clock::now();
    const GroupSpec spec = schottky_from_disk_pairs(kGenus2);
    const double t_max = 50;
    EnumOptions certified = opts(t_max);
    certified.pruning = PruningMode::certified;
    const PackingOrbit pruned = enumerate_orbit(spec, certified);

    // Certificate depth: every reduced word this long has a cap of curvature >= t_max.
    const int letters[4] = {1, -1, 2, -2};
    std::vector<std::vector<int>> level{{}};
    int depth = 0;
    for (;;) {
        ++depth;
        std::vector<std::vector<int>> next;
        for (const auto& w : level) {
            for (int x : letters) {
                if (!w.empty() && w.back() == -x) continue;
                next.push_back(w);
                next.back().push_back(x);
            }
        }
        level = std::move(next);
        bool all = true;
        for (const auto& w : level) all = all && 1 / std::tan(bounding_cap(w, spec).cap_data().radius) >= t_max;
        if (all) break;
    }

    EnumOptions none = opts(t_max);
    none.pruning = PruningMode::none;
    none.max_depth = depth;
    const PackingOrbit exhaustive = enumerate_orbit(spec, none);

    // Independent oracle: point maps and circumcircles over all reduced words to the same depth.
    KeyMap brute;
    std::vector<std::pair<int, oracle::PointMap>> frontier{{0, oracle::PointMap{}}};
    std::vector<oracle::PlaneCircle> seeds;
    for (const auto& p : kGenus2) {
        seeds.push_back({false, p.source.center, p.source.radius});
        seeds.push_back({false, p.target.center, p.target.radius});
    }
    for (int d = 0; d <= depth; ++d) {
        std::vector<std::pair<int, oracle::PointMap>> next;
        for (const auto& [last, g] : frontier) {
            for (const auto& s : seeds) {
                const auto img = oracle::image(g, s);
                if (oracle::curvature(img) < t_max) brute.emplace(canonical_key(oracle::to_inversive(img)), d);
            }
            for (int x : letters) {
                if (last == -x) continue;
                next.emplace_back(x, g.after(letter_map(x)));
            }
        }
        frontier = std::move(next);
    }

    const KeyMap got = keys_of(pruned), want = keys_of(exhaustive);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool ok = pruned.certified && got == want && got.size() == brute.size() &&
                    std::equal(got.begin(), got.end(), brute.begin(),
                               [](const auto& x, const auto& y) { return x.first == y.first; }) &&
                    secs < 10.0;
    return {ok, std::to_string(got.size()) + " circles certified, " + std::to_string(want.size()) +
                    " by exhaustive words to depth " + std::to_string(depth) + ", " + std::to_string(brute.size()) +
                    " by point-map oracle, " + fmt("%.3f", secs) + " s"};
}

// 4
Outcome rotation_invariance() {
    std::mt19937_64 rng(4004);
    const PackingOrbit orbit = enumerate_orbit(schottky_from_disk_pairs(kGenus2), opts(1000));
    const MotionMap k = oracle::random_rotation(rng).motion();
    const Region e = Region::cap(oracle::random_unit(rng), 1.1);
    const auto grid = threshold_grid(1, 1000, 64);
    const CountTable before = count_table(orbit, e, grid);
    const CountTable after = count_table(map_orbit(orbit, k), rotate_region(e, k), grid);
    int differ = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) differ += before.counts[j] != after.counts[j];
    return {differ == 0, std::to_string(64 - differ) + "/64 grid points equal, N(t_max) = " +
                             std::to_string(before.counts.back())};
}

// 5
Outcome synthetic_fit() {
    CountTable t;
    t.thresholds = threshold_grid(10, 1e4, 64);
    for (double x : t.thresholds) t.counts.push_back(static_cast<std::uint64_t>(std::llround(7 * std::pow(x, 1.3))));
    t.valid_to = 1e4;
    const FitResult f = fit_exponent(t, 10, 1e4);
    return {std::abs(f.exponent - 1.3) < 1e-2, "exponent " + fmt("%.6f", f.exponent)};
}

// 6
Outcome modular_calibration() {
    const auto start = Clock::now();
    const GroupSpec spec = modular_group(InversiveCircle::from_center_radius(Complex(0, 2), 0.5));
    const PackingOrbit orbit = enumerate_orbit(spec, opts(1000));
    const CountTable t = count_table(orbit, Region::full(), threshold_grid(1, 1000, 64));
    const FitResult f = fit_exponent(t, 50, 1000);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return {orbit.exhaustive && std::abs(f.exponent - 1.0) < 0.1 && secs < 120.0,
            "exponent " + fmt("%.4f", f.exponent) + " on [50, 1000], " + std::to_string(orbit.records.size()) +
                " circles, " + fmt("%.2f", secs) + " s"};
}

// Spherical cap of a plane disk.
Region disk_region(const Disk& d) {
    const Cap c = disk_cap(d.form());
    return Region::cap(c.center, c.radius);
}

// 7
Outcome cross_region_exponent(const PackingOrbit& orbit, double secs_enum) {
    const auto start = Clock::now();
    // Caps of the target disks at 2 and 2i: disjoint, and not exchanged by any symmetry of the configuration.
    const Region a = disk_region(kGenus2[0].target), b = disk_region(kGenus2[1].target);
    const auto grid = threshold_grid(1, 1e4, 64);
    const CountTable ta = count_table(orbit, a, grid), tb = count_table(orbit, b, grid);
    const FitResult fa = fit_exponent(ta, 100, 1e4), fb = fit_exponent(tb, 100, 1e4);
    const double rel = std::abs(fa.exponent - fb.exponent) / std::max(fa.exponent, fb.exponent);
    double lo = 1e300, hi = 0;
    for (const auto& [t, r] : ratio_series(ta, tb)) {
        if (t < 1e3) continue;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const double spread = (hi - lo) / lo;
    const double secs = secs_enum + std::chrono::duration<double>(Clock::now() - start).count();
    return {rel < 0.05 && spread < 0.10 && secs < 60.0,
            "exponents " + fmt("%.4f", fa.exponent) + " / " + fmt("%.4f", fb.exponent) + " (rel gap " +
                fmt("%.4f", rel) + "), ratio spread over [1e3, 1e4] " + fmt("%.4f", spread) + ", N = " +
                std::to_string(ta.counts.back()) + " / " + std::to_string(tb.counts.back()) + ", " +
                fmt("%.2f", secs) + " s"};
}

// 8
Outcome symmetric_ratio(const PackingOrbit& orbit) {
    // z -> -z normalizes the group and exchanges the caps around 2 and -2.
    const MotionMap flip(Mat2{Complex(0, 1), 0, 0, Complex(0, -1)});
    const Region a = Region::cap(plane_to_sphere(Complex(2)), 0.6), b = Region::cap(plane_to_sphere(Complex(-2)), 0.6);
    const auto grid = threshold_grid(1, orbit.t_max, 64);
    const auto ratios = ratio_series(count_table(orbit, a, grid), count_table(orbit, b, grid));
    bool exact = !ratios.empty();
    for (const auto& [t, r] : ratios) exact = exact && r == 1.0;
    // The orbit itself is invariant under the symmetry.
    KeyStore store;
    for (std::uint32_t i = 0; i < orbit.records.size(); ++i) store.insert_if_absent(orbit.records[i].circle, i);
    std::size_t missing = 0;
    for (const auto& r : orbit.records) missing += !store.find(apply_map_circle(flip, r.circle));
    return {exact && missing == 0, std::to_string(ratios.size()) + " thresholds, ratio " +
                                       (exact ? std::string("identically 1") : std::string("not constant")) + ", " +
                                       std::to_string(missing) + " circles without a mirror image"};
}

// 9
Outcome apollonian() {
    const std::array<InversiveCircle, 4> root{normalize_circle(-1, 0, 1), InversiveCircle::from_center_radius(0.5, 0.5),
                                              InversiveCircle::from_center_radius(-0.5, 0.5),
                                              InversiveCircle::from_center_radius(Complex(0, 2.0 / 3.0), 1.0 / 3.0)};
    const GroupSpec spec = apollonian_from_root(root);
    const PackingOrbit orbit = enumerate_orbit(spec, opts(1000));
    const double bends[4] = {-1, 2, 2, 3};
    const double descartes = 2 * (bends[1] + bends[2] + bends[3]) - bends[0];
    bool found = false;
    for (const auto& r : orbit.records) {
        if (r.word_length == 1 && !r.circle.is_line() && std::abs(1 / r.circle.radius() - descartes) < 1e-9 &&
            std::abs(r.circle.center() - Complex(0, 4.0 / 15.0)) < 1e-9)
            found = true;
    }
    KeyStore store;
    for (std::uint32_t i = 0; i < orbit.records.size(); ++i) store.insert_if_absent(orbit.records[i].circle, i);
    std::size_t missing = 0;
    for (const auto& r : orbit.records) {
        for (const auto& g : spec.generators) {
            const InversiveCircle img = apply_map_circle(g, r.circle);
            if (spherical_curvature(img) < orbit.t_max && !store.find(img)) ++missing;
        }
    }
    // Exact count from integer descartes quadruples; ties at the threshold reported separately.
    const std::array<oracle::Row, 4> rows{{{-1, 0, 0, 1}, {2, -1, 0, 0}, {2, 1, 0, 0}, {3, 0, -2, 1}}};
    const auto exact = oracle::gasket_rows(rows, 2003);
    const std::size_t below = oracle::gasket_count_below(exact, 2000);
    const std::size_t ties = oracle::gasket_count_below(exact, 2001) - below;
    return {found && missing == 0 && orbit.exhaustive && orbit.records.size() >= below &&
                orbit.records.size() <= below + ties,
            std::string(found ? "curvature-15 circle present" : "curvature-15 circle missing") + " (Descartes " +
                fmt("%.0f", descartes) + "), " + std::to_string(orbit.records.size()) + " circles vs " +
                std::to_string(below) + " exact (" + std::to_string(ties) + " at the threshold), " +
                std::to_string(missing) + " generator images missing"};
}

// 10
Outcome determinism() {
    const GroupSpec g2 = schottky_from_disk_pairs(kGenus2);
    const GroupSpec mod = modular_group(InversiveCircle::from_center_radius(Complex(0, 2), 0.5));
    bool same = true;
    std::size_t total = 0;
    for (const auto& [spec, t_max] : {std::pair{&g2, 1e4}, std::pair{&mod, 1e3}}) {
        std::string reference;
        KeyMap reference_keys;
        for (unsigned threads : {1u, 4u, 8u}) {
            const PackingOrbit orbit = enumerate_orbit(*spec, opts(t_max, threads));
            std::ostringstream jsonl;
            io::write_orbit_jsonl(jsonl, orbit);
            const KeyMap keys = keys_of(orbit);
            if (threads == 1) {
                reference = jsonl.str();
                reference_keys = keys;
                total += keys.size();
            } else {
                same = same && keys == reference_keys && jsonl.str() == reference;
            }
        }
    }
    return {same, std::to_string(total) + " circles over two groups; 1, 4 and 8 workers give identical JSONL"};
}

} // namespace

int main(int argc, char** argv) {
    // --known-failure N: criterion N is expected to fail; any other outcome is a regression.
    std::set<std::size_t> known;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--known-failure" && i + 1 < argc) {
            known.insert(std::stoul(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: census-acceptance [--known-failure N]...\n");
            return 2;
        }
    }
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
    criteria.emplace_back("curvature identities", curvature_identities);
    criteria.emplace_back("action oracle", action_oracle);
    criteria.emplace_back("brute-force enumeration equivalence", brute_force_equivalence);
    criteria.emplace_back("rotation invariance of counts", rotation_invariance);
    criteria.emplace_back("synthetic exponent recovery", synthetic_fit);
    criteria.emplace_back("modular-group calibration", modular_calibration);

    // Criteria 7 and 8 share the genus-2 orbit at t_max = 1e4.
    std::optional<PackingOrbit> big;
    double big_secs = 0;
    auto genus2_big = [&]() -> const PackingOrbit& {
        if (!big) {
            const auto start = Clock::now();
            big = enumerate_orbit(schottky_from_disk_pairs(kGenus2), opts(1e4));
            big_secs = std::chrono::duration<double>(Clock::now() - start).count();
        }
        return *big;
    };
    criteria.emplace_back("cross-region exponent equality", [&] {
        const PackingOrbit& o = genus2_big();
        return cross_region_exponent(o, big_secs);
    });
    criteria.emplace_back("symmetric-configuration ratio", [&] { return symmetric_ratio(genus2_big()); });
    criteria.emplace_back("apollonian first generation", apollonian);
    criteria.emplace_back("determinism", determinism);

    int failures = 0;
    std::set<std::size_t> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += !o.passed;
        if (!o.passed) failed.insert(i + 1);
        std::printf("%s %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    if (known.empty()) return failures == 0 ? 0 : 1;
    for (std::size_t k : known) std::printf("criterion %zu %s\n", k, failed.count(k) ? "fails as recorded" : "now passes");
    return failed == known ? 0 : 1;
}
