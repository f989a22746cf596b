#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "census/geometry.hpp"

namespace census {

struct Disk {
    Complex center;
    double radius = 0;

    HermitianForm form() const { return HermitianForm::disk(center, radius); }
    InversiveCircle boundary() const { return InversiveCircle::from_center_radius(center, radius); }
};

// Generator i sends the interior of `source` to the exterior of `target`.
struct DiskPair {
    Disk source;
    Disk target;
};

enum class Family { schottky, apollonian, modular, generic };

std::string_view family_name(Family family);

struct SchottkyData {
    std::vector<DiskPair> pairs;
};

struct ApollonianData {
    std::array<InversiveCircle, 4> root;
};

// Generators of the group and representatives of the circle orbits.
// Schottky seeds are ordered source_1, target_1, source_2, target_2, ...
struct GroupSpec {
    std::vector<MotionMap> generators;
    std::vector<InversiveCircle> seeds;
    Family family = Family::generic;
    std::variant<std::monostate, SchottkyData, ApollonianData> metadata;

    const SchottkyData* schottky() const { return std::get_if<SchottkyData>(&metadata); }
    const ApollonianData* apollonian() const { return std::get_if<ApollonianData>(&metadata); }
};

// Content hash of generators, seeds and family.
std::uint64_t spec_fingerprint(const GroupSpec& spec);

// Generator gamma(z) = c' + r r' / (z - c) for each pair. With
// enforce_disjoint the 2k closed disks must be pairwise disjoint (else
// DisksNotDisjoint); without it the spec is built as-is for diagnostics.
GroupSpec schottky_from_disk_pairs(const std::vector<DiskPair>& pairs, bool enforce_disjoint = true);

// Four mutually tangent circles. Generator i is the inversion in the circle
// through the tangency points of the three circles other than i.
GroupSpec apollonian_from_root(const std::array<InversiveCircle, 4>& root);

// <S, T> with S(z) = -1/z, T(z) = z + 1. The seed's disk must stay clear of
// the real axis.
GroupSpec modular_group(const InversiveCircle& seed);

GroupSpec generic_group(std::vector<MotionMap> generators, std::vector<InversiveCircle> seeds);

// Tangency point of two tangent circles (the degenerate member of their
// pencil).
ExtPoint tangency_point(const InversiveCircle& c1, const InversiveCircle& c2);

enum class CheckStatus { pass, fail, unknown };

std::string_view status_name(CheckStatus status);

namespace checks {
inline constexpr std::string_view disk_disjointness = "disk-disjointness";
inline constexpr std::string_view pairing = "pairing-maps-boundaries";
inline constexpr std::string_view root_tangency = "root-tangency";
inline constexpr std::string_view involutions = "generators-involutive";
inline constexpr std::string_view seed_margin = "seed-avoids-limit-set";
inline constexpr std::string_view convex_cocompact = "convex-cocompact";
inline constexpr std::string_view disjoint_images = "disjoint-images";
inline constexpr std::string_view seeds_in_domain = "seeds-in-domain-of-discontinuity";
} // namespace checks

struct Check {
    std::string name;
    CheckStatus status = CheckStatus::unknown;
    std::string message;
};

struct Diagnostics {
    std::vector<Check> checks;

    bool any_failed() const;
    const Check* find(std::string_view name) const;
};

// Best-effort surrogates for the local-finiteness hypotheses. Never decides
// geometric finiteness; generic specs report only "unknown".
Diagnostics validate_group(const GroupSpec& spec);

} // namespace census
