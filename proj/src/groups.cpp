#include "census/groups.hpp"

#include <algorithm>
#include <cstring>
#include <optional>
#include <sstream>

namespace census {

std::string_view family_name(Family family) {
    switch (family) {
    case Family::schottky: return "schottky";
    case Family::apollonian: return "apollonian";
    case Family::modular: return "modular";
    case Family::generic: return "generic";
    }
    return "generic";
}

std::string_view status_name(CheckStatus status) {
    switch (status) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

class Fnv1a {
public:
    void add(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        add_bits(bits);
    }
    void add(Complex z) {
        add(z.real());
        add(z.imag());
    }
    void add_bits(std::uint64_t bits) {
        for (int i = 0; i < 8; ++i) {
            hash_ ^= (bits >> (8 * i)) & 0xffu;
            hash_ *= 0x100000001b3ull;
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

bool disks_disjoint(const Disk& x, const Disk& y) {
    return std::abs(x.center - y.center) > x.radius + y.radius + Tolerances::geometric;
}

bool circles_match(const InversiveCircle& x, const InversiveCircle& y) {
    const auto cx = x.coefficients(), cy = y.coefficients();
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(cx[i] - cy[i]) > Tolerances::geometric * std::max(1.0, std::abs(cx[i]))) return false;
    }
    return true;
}

// First offending pair of disks among the 2k, in seed order.
std::optional<std::pair<std::size_t, std::size_t>> overlapping_disks(const std::vector<DiskPair>& pairs) {
    std::vector<Disk> disks;
    for (const auto& p : pairs) {
        disks.push_back(p.source);
        disks.push_back(p.target);
    }
    for (std::size_t i = 0; i < disks.size(); ++i) {
        for (std::size_t j = i + 1; j < disks.size(); ++j) {
            if (!disks_disjoint(disks[i], disks[j])) return std::pair{i, j};
        }
    }
    return std::nullopt;
}

std::string describe_disk_index(std::size_t idx) {
    std::ostringstream os;
    os << (idx % 2 == 0 ? "source" : "target") << " disk of pair " << idx / 2;
    return os.str();
}

} // namespace

std::uint64_t spec_fingerprint(const GroupSpec& spec) {
    Fnv1a h;
    h.add_bits(static_cast<std::uint64_t>(spec.family));
    for (const auto& g : spec.generators) {
        const Mat2& m = g.matrix();
        h.add(m.a);
        h.add(m.b);
        h.add(m.c);
        h.add(m.d);
        h.add_bits(g.conformal() ? 0 : 1);
    }
    for (const auto& s : spec.seeds) {
        for (double v : s.coefficients()) h.add(v);
    }
    return h.value();
}

GroupSpec schottky_from_disk_pairs(const std::vector<DiskPair>& pairs, bool enforce_disjoint) {
    if (pairs.empty()) throw Error(ErrorCode::InvalidOptions, "schottky group needs at least one disk pair");
    for (const auto& p : pairs) {
        if (!(p.source.radius > 0) || !(p.target.radius > 0)) {
            throw Error(ErrorCode::InvalidOptions, "schottky disk radii must be positive");
        }
    }
    if (enforce_disjoint) {
        if (auto bad = overlapping_disks(pairs)) {
            throw Error(ErrorCode::DisksNotDisjoint, describe_disk_index(bad->first) + " meets " +
                                                         describe_disk_index(bad->second));
        }
    }
    GroupSpec spec;
    spec.family = Family::schottky;
    for (const auto& [src, dst] : pairs) {
        const Complex c = src.center, cp = dst.center;
        const double rr = src.radius * dst.radius;
        spec.generators.emplace_back(Mat2{cp, rr - c * cp, Complex(1), -c});
        spec.seeds.push_back(src.boundary());
        spec.seeds.push_back(dst.boundary());
    }
    spec.metadata = SchottkyData{pairs};
    return spec;
}

ExtPoint tangency_point(const InversiveCircle& c1, const InversiveCircle& c2) {
    const double s = inversive_product(c1, c2) >= 0 ? 1.0 : -1.0;
    const double a = c1.a() - s * c2.a();
    const Complex b = c1.b() - s * c2.b();
    const double c = c1.c() - s * c2.c();
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (!(scale > Tolerances::invariant)) {
        throw Error(ErrorCode::DegenerateInput, "tangency_point: circles coincide");
    }
    // Point circle a|z - p|^2; a vanishes when the contact is at infinity.
    if (std::abs(a) <= Tolerances::invariant * scale) return ExtPoint::infinity();
    return ExtPoint(-b / a);
}

GroupSpec apollonian_from_root(const std::array<InversiveCircle, 4>& root) {
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double residual = std::abs(std::abs(inversive_product(root[i], root[j])) - 1.0);
            if (!(residual < Tolerances::geometric)) {
                std::ostringstream os;
                os << "root circles " << i << " and " << j << " are not tangent (residual " << residual << ")";
                throw Error(ErrorCode::NotTangent, os.str());
            }
        }
    }
    GroupSpec spec;
    spec.family = Family::apollonian;
    for (std::size_t i = 0; i < 4; ++i) {
        std::array<std::size_t, 3> others{};
        std::size_t k = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            if (j != i) others[k++] = j;
        }
        const InversiveCircle dual = circle_through_points(tangency_point(root[others[0]], root[others[1]]),
                                                           tangency_point(root[others[0]], root[others[2]]),
                                                           tangency_point(root[others[1]], root[others[2]]));
        spec.generators.push_back(MotionMap::inversion(dual));
    }
    spec.seeds.assign(root.begin(), root.end());
    spec.metadata = ApollonianData{root};
    return spec;
}

namespace {

// Distance by which the seed's disk clears the real axis (negative when it
// meets it). Lines always pass through infinity.
double real_axis_margin(const InversiveCircle& seed) {
    if (seed.is_line()) return -1.0;
    return std::abs(seed.center().imag()) - seed.radius();
}

} // namespace

GroupSpec modular_group(const InversiveCircle& seed) {
    const double margin = real_axis_margin(seed);
    if (!(margin > Tolerances::geometric)) {
        throw Error(ErrorCode::SeedMeetsLimitSet, "modular seed disk meets the real axis (margin " +
                                                      std::to_string(margin) + ")");
    }
    GroupSpec spec;
    spec.family = Family::modular;
    spec.generators.emplace_back(Mat2{0, -1, 1, 0});
    spec.generators.emplace_back(Mat2{1, 1, 0, 1});
    spec.seeds.push_back(seed);
    return spec;
}

GroupSpec generic_group(std::vector<MotionMap> generators, std::vector<InversiveCircle> seeds) {
    if (generators.empty()) throw Error(ErrorCode::InvalidOptions, "group needs at least one generator");
    if (seeds.empty()) throw Error(ErrorCode::InvalidOptions, "group needs at least one seed circle");
    GroupSpec spec;
    spec.family = Family::generic;
    spec.generators = std::move(generators);
    spec.seeds = std::move(seeds);
    return spec;
}

bool Diagnostics::any_failed() const {
    return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::fail; });
}

const Check* Diagnostics::find(std::string_view name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

void schottky_checks(const GroupSpec& spec, Diagnostics& out) {
    const SchottkyData* data = spec.schottky();
    if (data == nullptr) {
        out.checks.push_back({std::string(checks::disk_disjointness), CheckStatus::unknown, "no disk data"});
        return;
    }
    if (auto bad = overlapping_disks(data->pairs)) {
        out.checks.push_back({std::string(checks::disk_disjointness), CheckStatus::fail,
                              describe_disk_index(bad->first) + " meets " + describe_disk_index(bad->second)});
    } else {
        out.checks.push_back({std::string(checks::disk_disjointness), CheckStatus::pass,
                              "all " + std::to_string(2 * data->pairs.size()) + " closed disks are disjoint"});
    }
    Check pairing{std::string(checks::pairing), CheckStatus::pass, "every generator maps its source circle onto its target"};
    for (std::size_t i = 0; i < data->pairs.size() && i < spec.generators.size(); ++i) {
        const InversiveCircle image = apply_map_circle(spec.generators[i], data->pairs[i].source.boundary());
        if (!circles_match(image, data->pairs[i].target.boundary())) {
            pairing.status = CheckStatus::fail;
            pairing.message = "generator " + std::to_string(i) + " misses its target circle";
            break;
        }
    }
    out.checks.push_back(pairing);
}

void apollonian_checks(const GroupSpec& spec, Diagnostics& out) {
    const ApollonianData* data = spec.apollonian();
    Check tangency{std::string(checks::root_tangency), CheckStatus::pass, "root circles mutually tangent"};
    if (data == nullptr) {
        tangency.status = CheckStatus::unknown;
        tangency.message = "no root quadruple";
    } else {
        double worst = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = i + 1; j < 4; ++j) {
                const double residual = std::abs(std::abs(inversive_product(data->root[i], data->root[j])) - 1.0);
                worst = std::max(worst, residual);
                if (!(residual < Tolerances::geometric) && tangency.status == CheckStatus::pass) {
                    tangency.status = CheckStatus::fail;
                    tangency.message = "circles " + std::to_string(i) + " and " + std::to_string(j) + " not tangent";
                }
            }
        }
        if (tangency.status == CheckStatus::pass) {
            std::ostringstream os;
            os << "max tangency residual " << worst;
            tangency.message = os.str();
        }
    }
    out.checks.push_back(tangency);

    Check inv{std::string(checks::involutions), CheckStatus::pass, "every generator squares to the identity"};
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        if (!compose(spec.generators[i], spec.generators[i]).same_as(MotionMap::identity())) {
            inv.status = CheckStatus::fail;
            inv.message = "generator " + std::to_string(i) + " is not an involution";
            break;
        }
    }
    out.checks.push_back(inv);
}

void modular_checks(const GroupSpec& spec, Diagnostics& out) {
    Check c{std::string(checks::seed_margin), CheckStatus::pass, ""};
    for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
        const double margin = real_axis_margin(spec.seeds[i]);
        if (!(margin > Tolerances::geometric)) {
            c.status = CheckStatus::fail;
            c.message = "seed " + std::to_string(i) + " meets the real axis";
            break;
        }
        std::ostringstream os;
        os << "seed disks clear the real axis (margin " << margin << ")";
        c.message = os.str();
    }
    out.checks.push_back(c);
}

void generic_checks(Diagnostics& out) {
    out.checks.push_back({std::string(checks::convex_cocompact), CheckStatus::unknown,
                          "not decidable from generators; enumeration budget acts as the watchdog"});
    out.checks.push_back({std::string(checks::disjoint_images), CheckStatus::unknown,
                          "orbit circles are not checked for disjointness; inspect small enumerations"});
    out.checks.push_back({std::string(checks::seeds_in_domain), CheckStatus::unknown,
                          "the limit set is not computed; verify seed disks avoid it by construction"});
}

} // namespace

Diagnostics validate_group(const GroupSpec& spec) {
    Diagnostics out;
    switch (spec.family) {
    case Family::schottky: schottky_checks(spec, out); break;
    case Family::apollonian: apollonian_checks(spec, out); break;
    case Family::modular: modular_checks(spec, out); break;
    case Family::generic: generic_checks(out); break;
    }
    return out;
}

} // namespace census
