#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "census/groups.hpp"
#include "census/orbit.hpp"
#include "census/region.hpp"
#include "oracle.hpp"

using namespace census;

namespace {

const std::vector<DiskPair> genus1{{{-2.0, 1.0}, {2.0, 1.0}}};
const std::vector<DiskPair> genus2{{{-2.0, 1.0}, {2.0, 1.0}}, {{Complex(0, -2), 1.0}, {Complex(0, 2), 1.0}}};

// Letter k > 0 is pair k-1 read forwards, -k its inverse.
oracle::PointMap letter_map(const std::vector<DiskPair>& pairs, int letter) {
    const DiskPair& p = pairs[std::abs(letter) - 1];
    const Complex c = p.source.center, c2 = p.target.center;
    const double rr = p.source.radius * p.target.radius;
    const oracle::PointMap g{c2, rr - c * c2, 1.0, -c};
    if (letter > 0) return g;
    return {g.d, -g.b, -g.c, g.a};
}

std::vector<oracle::PlaneCircle> seed_circles(const std::vector<DiskPair>& pairs) {
    std::vector<oracle::PlaneCircle> out;
    for (const auto& p : pairs) {
        out.push_back({false, p.source.center, p.source.radius});
        out.push_back({false, p.target.center, p.target.radius});
    }
    return out;
}

// Every reduced word up to `depth`, as (word, composed point map).
std::vector<std::pair<std::vector<int>, oracle::PointMap>> reduced_words(const std::vector<DiskPair>& pairs, int depth) {
    std::vector<int> letters;
    for (int k = 1; k <= static_cast<int>(pairs.size()); ++k) {
        letters.push_back(k);
        letters.push_back(-k);
    }
    std::vector<std::pair<std::vector<int>, oracle::PointMap>> all{{{}, oracle::PointMap{}}}, level = all;
    for (int d = 0; d < depth; ++d) {
        std::vector<std::pair<std::vector<int>, oracle::PointMap>> next;
        for (const auto& [w, g] : level) {
            for (int x : letters) {
                if (!w.empty() && w.back() == -x) continue;
                auto w2 = w;
                w2.push_back(x);
                next.emplace_back(std::move(w2), g.after(letter_map(pairs, x)));
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        level = std::move(next);
    }
    return all;
}

struct KeyLess {
    bool operator()(const CanonicalKey& x, const CanonicalKey& y) const { return x.cells < y.cells; }
};

std::map<CanonicalKey, int, KeyLess> brute_force(const std::vector<DiskPair>& pairs, int depth, double t_max) {
    std::map<CanonicalKey, int, KeyLess> out;
    const auto seeds = seed_circles(pairs);
    for (const auto& [w, g] : reduced_words(pairs, depth)) {
        for (const auto& s : seeds) {
            const oracle::PlaneCircle img = oracle::image(g, s);
            if (oracle::curvature(img) >= t_max) continue;
            const CanonicalKey k = canonical_key(oracle::to_inversive(img));
            auto [it, fresh] = out.emplace(k, static_cast<int>(w.size()));
            if (!fresh) it->second = std::min(it->second, static_cast<int>(w.size()));
        }
    }
    return out;
}

// Smallest depth at which every reduced word's bounding cap is already too small.
int certificate_depth(const GroupSpec& spec, double t_max) {
    const auto& pairs = spec.schottky()->pairs;
    for (int depth = 1;; ++depth) {
        bool all_small = true;
        for (const auto& [w, g] : reduced_words(pairs, depth)) {
            if (static_cast<int>(w.size()) != depth) continue;
            const Region cap = bounding_cap(w, spec);
            if (1.0 / std::tan(cap.cap_data().radius) < t_max) {
                all_small = false;
                break;
            }
        }
        if (all_small) return depth;
    }
}

std::map<CanonicalKey, int, KeyLess> keys_of(const PackingOrbit& orbit) {
    std::map<CanonicalKey, int, KeyLess> out;
    for (const auto& r : orbit.records) out.emplace(canonical_key(r.circle), r.word_length);
    return out;
}

EnumOptions options(double t_max, PruningMode mode = PruningMode::automatic, unsigned threads = 1) {
    EnumOptions o;
    o.t_max = t_max;
    o.pruning = mode;
    o.threads = threads;
    return o;
}

std::array<InversiveCircle, 4> gasket_root() {
    return {normalize_circle(-1, 0, 1), InversiveCircle::from_center_radius(0.5, 0.5),
            InversiveCircle::from_center_radius(-0.5, 0.5),
            InversiveCircle::from_center_radius(Complex(0, 2.0 / 3.0), 1.0 / 3.0)};
}

void check_invariance(const GroupSpec& spec, const PackingOrbit& orbit) {
    KeyStore store;
    for (std::uint32_t i = 0; i < orbit.records.size(); ++i) store.insert_if_absent(orbit.records[i].circle, i);
    CHECK(store.size() == orbit.records.size());
    int missing = 0;
    for (const auto& r : orbit.records) {
        CHECK(r.curvature < orbit.t_max);
        for (const auto& g : spec.generators) {
            for (const MotionMap& h : {g, g.inverse()}) {
                const InversiveCircle img = apply_map_circle(h, r.circle);
                if (spherical_curvature(img) < orbit.t_max && !store.find(img)) ++missing;
            }
        }
    }
    CHECK(missing == 0);
}

} // namespace

TEST_CASE("canonical key examples") {
    const InversiveCircle unit = normalize_circle(1, 0, -1);
    KeyStore store;
    store.insert_if_absent(unit, 0);
    CHECK(store.find(normalize_circle(1, 1e-10, -1 + 1e-10)) == std::optional<std::uint32_t>(0));
    CHECK(canonical_key(unit) != canonical_key(normalize_circle(1, 0.1, -1.01)));
    CHECK_FALSE(store.find(normalize_circle(1, 0.1, -1.01)));
    CHECK(canonical_key(normalize_circle(3, -6, 3 * (4 - 0.25))) == canonical_key(normalize_circle(1, -2, 4 - 0.25)));
    CHECK_THROWS(canonical_key(unit, 0.0));
}

TEST_CASE("key store collides within tolerance and separates distinct circles") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> jitter(-4e-10, 4e-10);
    int straddling = 0;
    for (int i = 0; i < 5000; ++i) {
        const InversiveCircle c = oracle::random_circle(rng);
        KeyStore store;
        store.insert_if_absent(c, 7);
        const InversiveCircle near = normalize_circle(c.a() + jitter(rng), c.b() + Complex(jitter(rng), jitter(rng)),
                                                      c.c() + jitter(rng));
        const auto cx = c.coefficients(), cy = near.coefficients();
        bool within = true;
        for (int k = 0; k < 4; ++k) within = within && std::abs(cx[k] - cy[k]) < 1e-9;
        if (!within) continue;
        straddling += canonical_key(c) != canonical_key(near);
        CHECK(store.find(near) == std::optional<std::uint32_t>(7));
        CHECK(store.insert_if_absent(near, 9) == std::optional<std::uint32_t>(7));
        const InversiveCircle far = oracle::random_circle(rng);
        const auto cf = far.coefficients();
        double gap = 0;
        for (int k = 0; k < 4; ++k) gap = std::max(gap, std::abs(cx[k] - cf[k]));
        if (gap > 1e-5) CHECK_FALSE(store.find(far));
    }
    CHECK(straddling > 0);
}

TEST_CASE("genus-1 orbit below the first generation is the two seeds") {
    const GroupSpec spec = schottky_from_disk_pairs(genus1);
    double first = 1e300;
    for (const auto& [w, g] : reduced_words(genus1, 1)) {
        if (w.empty()) continue;
        for (const auto& s : seed_circles(genus1)) {
            const double k = oracle::curvature(oracle::image(g, s));
            if (k > 2.0 + 1e-9) first = std::min(first, k);
        }
    }
    REQUIRE(first > 2.5);
    const PackingOrbit orbit = enumerate_orbit(spec, options(0.5 * (2.0 + first)));
    CHECK(orbit.records.size() == 2);
    CHECK(orbit.exhaustive);
    CHECK(orbit.certified);
    for (const auto& r : orbit.records) {
        CHECK(r.word_length == 0);
        CHECK(r.curvature == doctest::Approx(2.0));
    }
}

TEST_CASE("certified pruning equals brute force") {
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    for (double t_max : {10.0, 20.0, 50.0}) {
        CAPTURE(t_max);
        const int depth = certificate_depth(spec, t_max);
        const PackingOrbit certified = enumerate_orbit(spec, options(t_max, PruningMode::certified));
        CHECK(certified.certified);
        const auto got = keys_of(certified);
        // Two levels past the certificate depth: nothing new may appear.
        const auto want = brute_force(genus2, depth + 2, t_max);
        CHECK(got.size() == want.size());
        CHECK(got == want);

        EnumOptions none = options(t_max, PruningMode::none);
        none.max_depth = depth;
        const PackingOrbit truncated = enumerate_orbit(spec, none);
        CHECK(truncated.depth_limited);
        CHECK_FALSE(truncated.exhaustive);
        CHECK(keys_of(truncated) == got);
    }
}

TEST_CASE("witnesses reproduce their circles") {
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    const PackingOrbit orbit = enumerate_orbit(spec, options(200));
    const auto seeds = seed_circles(genus2);
    for (const auto& r : orbit.records) {
        oracle::PointMap g;
        for (int x : r.witness) g = g.after(letter_map(genus2, x));
        const auto img = oracle::to_inversive(oracle::image(g, seeds[r.seed]));
        CHECK(canonical_key(img) == canonical_key(r.circle));
        CHECK(static_cast<int>(r.witness.size()) == r.word_length);
    }
}

TEST_CASE("bounding caps contain every extension and nest") {
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    CHECK(bounding_cap({}, spec).kind() == Region::Kind::full);
    CHECK_THROWS_AS(bounding_cap({1, -1}, spec), Error);
    CHECK_THROWS_AS(bounding_cap({1}, modular_group(InversiveCircle::from_center_radius(Complex(0, 2), 0.5))), Error);

    std::mt19937_64 rng(23);
    const int letters[4] = {1, -1, 2, -2};
    auto random_reduced = [&](std::vector<int> w, int length) {
        while (static_cast<int>(w.size()) < length) {
            const int x = letters[rng() % 4];
            if (!w.empty() && w.back() == -x) continue;
            w.push_back(x);
        }
        return w;
    };
    const auto seeds = seed_circles(genus2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto prefix = random_reduced({}, 1 + static_cast<int>(rng() % 4));
        const Cap cap = bounding_cap(prefix, spec).cap_data();
        for (int k = 0; k < 100; ++k) {
            const auto w = random_reduced(prefix, static_cast<int>(prefix.size()) + 3);
            oracle::PointMap g;
            for (int x : w) g = g.after(letter_map(genus2, x));
            const auto& s = seeds[rng() % seeds.size()];
            for (double t = 0; t < 6.28; t += 0.5) {
                const Vec3 p = oracle::sphere_point(g(s.center + std::polar(s.radius, t)));
                CHECK(angle_between(cap.center, p) <= cap.radius + 1e-9);
            }
        }
        auto longer = prefix;
        longer = random_reduced(longer, static_cast<int>(prefix.size()) + 1);
        CHECK(cap_contains_cap(cap, bounding_cap(longer, spec).cap_data()));
    }
}

TEST_CASE("monotone in t_max") {
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    const PackingOrbit small = enumerate_orbit(spec, options(20));
    const PackingOrbit large = enumerate_orbit(spec, options(50));
    const auto big = keys_of(large);
    for (const auto& [k, len] : keys_of(small)) CHECK(big.count(k) == 1);
    CHECK(small.records.size() < large.records.size());
}

TEST_CASE("orbits are invariant at truncation") {
    const GroupSpec g2 = schottky_from_disk_pairs(genus2);
    check_invariance(g2, enumerate_orbit(g2, options(1000)));
    const GroupSpec mod = modular_group(InversiveCircle::from_center_radius(Complex(0, 2), 0.5));
    check_invariance(mod, enumerate_orbit(mod, options(300)));
    const GroupSpec ap = apollonian_from_root(gasket_root());
    check_invariance(ap, enumerate_orbit(ap, options(150)));
}

TEST_CASE("apollonian orbit matches exact integer descartes enumeration") {
    const std::array<oracle::Row, 4> root{{{-1, 0, 0, 1}, {2, -1, 0, 0}, {2, 1, 0, 0}, {3, 0, -2, 1}}};
    const GroupSpec spec = apollonian_from_root(gasket_root());
    for (long long twice : {61LL, 301LL, 801LL}) {
        const auto rows = oracle::gasket_rows(root, twice + 2);
        std::set<CanonicalKey, KeyLess> expected;
        for (const auto& r : rows) {
            if (std::llabs(r[0] + r[3]) >= twice) continue;
            expected.insert(canonical_key(normalize_circle(double(r[0]), Complex(double(r[1]), double(r[2])), double(r[3]))));
        }
        REQUIRE(expected.size() == oracle::gasket_count_below(rows, twice));
        const PackingOrbit orbit = enumerate_orbit(spec, options(0.5 * twice));
        std::set<CanonicalKey, KeyLess> got;
        for (const auto& r : orbit.records) got.insert(canonical_key(r.circle));
        CHECK(got.size() == orbit.records.size());
        CHECK(got == expected);
    }
}

TEST_CASE("apollonian first generation") {
    const GroupSpec spec = apollonian_from_root(gasket_root());
    EnumOptions o = options(1000);
    o.max_depth = 1;
    const PackingOrbit orbit = enumerate_orbit(spec, o);
    CHECK(orbit.records.size() == 8);
    CHECK(orbit.depth_limited);
    int roots = 0;
    std::multiset<long> bends;
    for (const auto& r : orbit.records) {
        roots += r.word_length == 0;
        bends.insert(std::lround(r.circle.is_line() ? 0 : 1.0 / r.circle.radius()));
    }
    CHECK(roots == 4);
    // Descartes: 2(k1+k2+k3) - k4 for each root replaced.
    CHECK(bends == std::multiset<long>{1, 2, 2, 3, 15, 6, 6, 3});
}

TEST_CASE("deterministic across thread counts") {
    const GroupSpec g2 = schottky_from_disk_pairs(genus2);
    const GroupSpec mod = modular_group(InversiveCircle::from_center_radius(Complex(0, 2), 0.5));
    for (const GroupSpec* spec : {&g2, &mod}) {
        const PackingOrbit one = enumerate_orbit(*spec, options(300, PruningMode::automatic, 1));
        for (unsigned threads : {4u, 8u}) {
            const PackingOrbit many = enumerate_orbit(*spec, options(300, PruningMode::automatic, threads));
            REQUIRE(many.records.size() == one.records.size());
            for (std::size_t i = 0; i < one.records.size(); ++i) {
                CHECK(one.records[i].circle.coefficients() == many.records[i].circle.coefficients());
                CHECK(one.records[i].witness == many.records[i].witness);
            }
            CHECK(many.examined == one.examined);
        }
    }
}

TEST_CASE("budget semantics") {
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    const PackingOrbit full = enumerate_orbit(spec, options(1000));
    for (std::uint64_t budget : {1ull, 5ull, 37ull, 200ull}) {
        EnumOptions o = options(1000);
        o.budget = budget;
        const PackingOrbit part = enumerate_orbit(spec, o);
        CHECK(part.examined <= budget);
        CHECK(part.budget_exhausted);
        CHECK_FALSE(part.exhaustive);
        CHECK_FALSE(part.warnings.empty());
        const auto all = keys_of(full);
        for (const auto& [k, len] : keys_of(part)) CHECK(all.count(k) == 1);
    }
    EnumOptions o = options(1000);
    o.budget = full.examined;
    CHECK(enumerate_orbit(spec, o).exhaustive);
}

TEST_CASE("options are validated") {
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    CHECK_THROWS_AS(enumerate_orbit(spec, options(0)), Error);
    EnumOptions o = options(10);
    o.budget = 0;
    CHECK_THROWS_AS(enumerate_orbit(spec, o), Error);
    o = options(10);
    o.slack_depth = -1;
    CHECK_THROWS_AS(enumerate_orbit(spec, o), Error);
    const GroupSpec mod = modular_group(InversiveCircle::from_center_radius(Complex(0, 2), 0.5));
    CHECK_THROWS_AS(enumerate_orbit(mod, options(10, PruningMode::certified)), Error);
    const PackingOrbit slack = enumerate_orbit(mod, options(10));
    CHECK(slack.exhaustive);
    CHECK_FALSE(slack.certified);
}

TEST_CASE("mapping an orbit by a rotation moves every circle") {
    std::mt19937_64 rng(5);
    const GroupSpec spec = schottky_from_disk_pairs(genus2);
    const PackingOrbit orbit = enumerate_orbit(spec, options(100));
    const MotionMap k = oracle::random_rotation(rng).motion();
    const PackingOrbit moved = map_orbit(orbit, k);
    REQUIRE(moved.records.size() == orbit.records.size());
    for (std::size_t i = 0; i < orbit.records.size(); ++i) {
        CHECK(moved.records[i].curvature == doctest::Approx(orbit.records[i].curvature).epsilon(1e-9));
    }
}
