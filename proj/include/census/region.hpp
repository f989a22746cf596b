#pragma once

#include <vector>

#include "census/geometry.hpp"

namespace census {

// A subset of S^2 built from closed caps. Complements are closed too: a
// circle touching the boundary of a cap meets both the cap and its
// complement.
class Region {
public:
    enum class Kind { full, cap, complement, union_of };

    static Region full();
    // Center is normalized; radius must lie in (0, pi).
    static Region cap(const Vec3& center, double radius);
    static Region complement(Region inner);
    // Throws InvalidOptions on an empty list.
    static Region union_of(std::vector<Region> parts);

    Kind kind() const { return kind_; }
    const Cap& cap_data() const { return cap_; }
    const std::vector<Region>& children() const { return children_; }

private:
    Region() = default;

    Kind kind_ = Kind::full;
    Cap cap_{};
    std::vector<Region> children_;
};

// Does the circle meet E (boundary contact counts)?
bool region_intersects(const Region& region, const SphericalCircle& circle);

// Image of the region under a rotation of the sphere (unitary map).
Region rotate_region(const Region& region, const MotionMap& rotation);

// Closed containment of a circle in a cap.
bool cap_contains_circle(const Cap& cap, const SphericalCircle& circle,
                         double tol = Tolerances::geometric);
bool cap_contains_cap(const Cap& outer, const Cap& inner, double tol = Tolerances::geometric);

} // namespace census
