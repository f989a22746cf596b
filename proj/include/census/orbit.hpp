#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "census/groups.hpp"
#include "census/region.hpp"

namespace census {

// Quantized normalized coefficients (a, Re b, Im b, c).
struct CanonicalKey {
    std::array<std::int64_t, 4> cells{};

    bool operator==(const CanonicalKey&) const = default;
};

struct CanonicalKeyHash {
    std::size_t operator()(const CanonicalKey& key) const noexcept;
};

inline constexpr double kDefaultQuantum = 1e-7;

CanonicalKey canonical_key(const InversiveCircle& circle, double quantum = kDefaultQuantum);

// Deduplicating store keyed by quantized circles. A lookup probes the
// neighbouring cell along every coordinate that lies within match_tol of a
// cell boundary, so circles within match_tol coordinate-wise always collide.
// Not synchronized: concurrent find() is safe, insert() is not.
class KeyStore {
public:
    explicit KeyStore(double quantum = kDefaultQuantum, double match_tol = Tolerances::geometric);

    std::optional<std::uint32_t> find(const InversiveCircle& circle) const;
    // Returns the existing value if a matching circle is present.
    std::optional<std::uint32_t> insert_if_absent(const InversiveCircle& circle, std::uint32_t value);

    std::size_t size() const { return map_.size(); }
    double quantum() const { return quantum_; }

private:
    double quantum_;
    double match_cells_;
    std::unordered_map<CanonicalKey, std::uint32_t, CanonicalKeyHash> map_;
};

enum class PruningMode { automatic, certified, slack, none };

struct EnumOptions {
    double t_max = 0;
    std::uint64_t budget = 100'000'000; // circle examinations
    int slack_depth = 5;
    double dedup_quantum = kDefaultQuantum;
    PruningMode pruning = PruningMode::automatic;
    std::optional<int> max_depth;       // word length cap
    unsigned threads = 0;               // 0 = hardware concurrency

    // Throws InvalidOptions on out-of-range fields.
    void validate() const;
};

// One circle of the truncated packing. The circle equals
// L1 o L2 o ... o Ln (seeds[seed]) for witness = [L1, ..., Ln]; letter k > 0
// is generator k-1, k < 0 the inverse of generator -k-1.
struct OrbitRecord {
    InversiveCircle circle;
    double curvature = 0;
    int word_length = 0;
    std::vector<int> witness;
    int seed = 0;
};

struct PackingOrbit {
    std::vector<OrbitRecord> records;
    double t_max = 0;
    std::uint64_t fingerprint = 0;
    bool exhaustive = false;      // search ended on its own (no budget / depth cut)
    bool certified = false;       // exhaustive and every pruned branch was certified
    bool budget_exhausted = false;
    bool depth_limited = false;
    std::uint64_t examined = 0;
    std::vector<std::string> warnings;
};

std::uint64_t orbit_fingerprint(const GroupSpec& spec, double t_max);

// Cap containing every circle produced by any reduced extension of the word
// (including the word itself). Empty prefix: the whole sphere.
Region bounding_cap(const std::vector<int>& prefix, const GroupSpec& spec);

// All circles with curvature < t_max, by breadth-first search over words.
// Output is independent of the thread count.
PackingOrbit enumerate_orbit(const GroupSpec& spec, const EnumOptions& options);

// Image of every record under g (witnesses are dropped).
PackingOrbit map_orbit(const PackingOrbit& orbit, const MotionMap& g);

} // namespace census
