#include "census/region.hpp"

#include <algorithm>
#include <numbers>
#include <utility>

namespace census {

Region Region::full() { return Region{}; }

Region Region::cap(const Vec3& center, double radius) {
    const double n = center.norm();
    if (!(n > 0) || !std::isfinite(n)) {
        throw Error(ErrorCode::InvalidOptions, "cap center must be a non-zero vector");
    }
    if (!(radius > 0 && radius < std::numbers::pi)) {
        throw Error(ErrorCode::InvalidOptions, "cap radius must lie in (0, pi)");
    }
    Region r;
    r.kind_ = Kind::cap;
    r.cap_ = {center * (1.0 / n), radius};
    return r;
}

Region Region::complement(Region inner) {
    Region r;
    r.kind_ = Kind::complement;
    r.children_.push_back(std::move(inner));
    return r;
}

Region Region::union_of(std::vector<Region> parts) {
    if (parts.empty()) throw Error(ErrorCode::InvalidOptions, "union of regions must be non-empty");
    Region r;
    r.kind_ = Kind::union_of;
    r.children_ = std::move(parts);
    return r;
}

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kTol = Tolerances::invariant;

// Closed subset of the circle's parameter range [0, 2pi), as sorted
// intervals.
struct ArcSet {
    bool full = false;
    std::vector<std::pair<double, double>> arcs;

    bool empty() const { return !full && arcs.empty(); }

    static ArcSet everything() { return {true, {}}; }
    static ArcSet nothing() { return {}; }

    static ArcSet centered(double mid, double half_width) {
        if (half_width >= std::numbers::pi) return everything();
        ArcSet s;
        double lo = std::fmod(mid - half_width, kTwoPi);
        if (lo < 0) lo += kTwoPi;
        const double hi = lo + 2 * half_width;
        if (hi <= kTwoPi) {
            s.arcs.emplace_back(lo, hi);
            if (hi >= kTwoPi - kTol) s.arcs.emplace_back(0.0, 0.0);
        } else {
            s.arcs.emplace_back(0.0, hi - kTwoPi);
            s.arcs.emplace_back(lo, kTwoPi);
        }
        std::sort(s.arcs.begin(), s.arcs.end());
        return s;
    }
};

ArcSet unite(const ArcSet& x, const ArcSet& y) {
    if (x.full || y.full) return ArcSet::everything();
    ArcSet out;
    out.arcs = x.arcs;
    out.arcs.insert(out.arcs.end(), y.arcs.begin(), y.arcs.end());
    std::sort(out.arcs.begin(), out.arcs.end());
    return out;
}

ArcSet intersect(const ArcSet& x, const ArcSet& y) {
    if (x.full) return y;
    if (y.full) return x;
    ArcSet out;
    for (const auto& [lo1, hi1] : x.arcs) {
        for (const auto& [lo2, hi2] : y.arcs) {
            const double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
            if (lo <= hi + kTol) out.arcs.emplace_back(lo, std::max(lo, hi));
        }
    }
    std::sort(out.arcs.begin(), out.arcs.end());
    return out;
}

// Parameterization p(t) = cos(theta) n + sin(theta) (cos t e1 + sin t e2).
struct CircleFrame {
    SphericalCircle circle;
    Vec3 e1, e2;

    explicit CircleFrame(const SphericalCircle& c) : circle(c) {
        const Vec3& n = c.normal;
        const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        e1 = n.cross(helper).normalized();
        e2 = n.cross(e1);
    }
};

ArcSet cap_arcs(const CircleFrame& frame, const Cap& cap) {
    const double theta = frame.circle.theta;
    const double psi = angle_between(frame.circle.normal, cap.center);
    // Angular distance from the cap center to the circle ranges over
    // [|psi - theta|, min(psi + theta, 2pi - psi - theta)].
    const double nearest = std::abs(psi - theta);
    const double farthest = std::min(psi + theta, kTwoPi - psi - theta);
    if (nearest > cap.radius + kTol) return ArcSet::nothing();
    if (farthest <= cap.radius + kTol) return ArcSet::everything();

    const Vec3& u = cap.center;
    const double c0 = std::cos(theta) * frame.circle.normal.dot(u);
    const double along1 = frame.e1.dot(u), along2 = frame.e2.dot(u);
    const double amp = std::sin(theta) * std::hypot(along1, along2);
    const double mid = std::atan2(along2, along1);
    if (amp <= 0) return ArcSet::everything();
    const double k = std::clamp((std::cos(cap.radius) - c0) / amp, -1.0, 1.0);
    return ArcSet::centered(mid, std::acos(k));
}

ArcSet arcs_of(const Region& region, const CircleFrame& frame, bool negated);

ArcSet combine_children(const Region& region, const CircleFrame& frame, bool negated) {
    // Union, or intersection of complements under negation.
    ArcSet acc = negated ? ArcSet::everything() : ArcSet::nothing();
    for (const Region& child : region.children()) {
        const ArcSet part = arcs_of(child, frame, negated);
        acc = negated ? intersect(acc, part) : unite(acc, part);
    }
    return acc;
}

ArcSet arcs_of(const Region& region, const CircleFrame& frame, bool negated) {
    switch (region.kind()) {
    case Region::Kind::full:
        return negated ? ArcSet::nothing() : ArcSet::everything();
    case Region::Kind::cap: {
        Cap cap = region.cap_data();
        if (negated) cap = {-cap.center, std::numbers::pi - cap.radius};
        return cap_arcs(frame, cap);
    }
    case Region::Kind::complement:
        return arcs_of(region.children().front(), frame, !negated);
    case Region::Kind::union_of:
        return combine_children(region, frame, negated);
    }
    return ArcSet::nothing();
}

} // namespace

bool region_intersects(const Region& region, const SphericalCircle& circle) {
    return !arcs_of(region, CircleFrame(circle), false).empty();
}

Region rotate_region(const Region& region, const MotionMap& rotation) {
    switch (region.kind()) {
    case Region::Kind::full:
        return region;
    case Region::Kind::cap: {
        const Vec3 moved = plane_to_sphere(apply_map_point(rotation, sphere_to_plane(region.cap_data().center)));
        return Region::cap(moved, region.cap_data().radius);
    }
    case Region::Kind::complement:
        return Region::complement(rotate_region(region.children().front(), rotation));
    case Region::Kind::union_of: {
        std::vector<Region> parts;
        for (const Region& child : region.children()) parts.push_back(rotate_region(child, rotation));
        return Region::union_of(std::move(parts));
    }
    }
    return region;
}

bool cap_contains_circle(const Cap& cap, const SphericalCircle& circle, double tol) {
    return angle_between(cap.center, circle.normal) + circle.theta <= cap.radius + tol;
}

bool cap_contains_cap(const Cap& outer, const Cap& inner, double tol) {
    return angle_between(outer.center, inner.center) + inner.radius <= outer.radius + tol;
}

} // namespace census
