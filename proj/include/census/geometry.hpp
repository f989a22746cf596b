#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "census/error.hpp"

// Circles on the extended complex plane and the unit sphere, and the
// Möbius / anti-Möbius maps acting on them.
//
// Conventions:
//  * A circle is the zero set of the Hermitian form
//        a|z|^2 + conj(b) z + b conj(z) + c,
//    i.e. the matrix [[a, b], [conj(b), c]] evaluated on (z, 1). a = 0 is a
//    line (a circle through infinity).
//  * The sphere is identified with the extended plane by stereographic
//    projection from the north pole onto the equatorial plane.
//  * With these conventions the spherical curvature of a normalized circle is
//    the closed form |a + c| / 2.
namespace census {

using Complex = std::complex<double>;

struct Tolerances {
    static constexpr double invariant = 1e-12;
    static constexpr double geometric = 1e-9;
    static constexpr double degenerate = 1e-20;
};

// A point of the Riemann sphere.
struct ExtPoint {
    Complex z{};
    bool at_infinity = false;

    ExtPoint() = default;
    ExtPoint(Complex value) : z(value) {}
    ExtPoint(double value) : z(value) {}

    static ExtPoint infinity() {
        ExtPoint p;
        p.at_infinity = true;
        return p;
    }
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const { return *this * (1.0 / norm()); }
};

// Angle between two unit vectors, accurate near 0 and pi.
double angle_between(const Vec3& u, const Vec3& v);

// Raw (unnormalized) Hermitian form. Carries a side: the closed disk
// {z : form(z) <= 0}. Congruence by a map preserves the side.
struct HermitianForm {
    double a = 0;
    Complex b{};
    double c = 0;

    double discriminant() const { return std::norm(b) - a * c; }
    double evaluate(Complex z) const {
        return a * std::norm(z) + 2.0 * (std::conj(b) * z).real() + c;
    }

    // Closed disk |z - center| <= radius.
    static HermitianForm disk(Complex center, double radius) {
        return {1.0, -center, std::norm(center) - radius * radius};
    }
};

class InversiveCircle;
namespace detail {
// Sign rule only; the caller guarantees unit discriminant.
InversiveCircle with_canonical_sign(double a, Complex b, double c);
} // namespace detail

// A circle in canonical coordinates: |b|^2 - ac = 1 and the sign fixed by
// a + c >= 0 (ties: a > 0, then arg b in [0, pi)). Only normalize_circle
// and the map action produce these, so every instance satisfies the invariants.
class InversiveCircle {
public:
    double a() const { return a_; }
    Complex b() const { return b_; }
    double c() const { return c_; }

    bool is_line() const { return std::abs(a_) < Tolerances::invariant; }
    // Euclidean center and radius; meaningless for lines.
    Complex center() const { return -b_ / a_; }
    double radius() const { return 1.0 / std::abs(a_); }

    HermitianForm form() const { return {a_, b_, c_}; }
    std::array<double, 4> coefficients() const { return {a_, b_.real(), b_.imag(), c_}; }

    static InversiveCircle from_center_radius(Complex center, double radius);

private:
    friend InversiveCircle detail::with_canonical_sign(double a, Complex b, double c);
    InversiveCircle(double a, Complex b, double c) : a_(a), b_(b), c_(c) {}

    double a_;
    Complex b_;
    double c_;
};

// Scale to unit discriminant and apply the canonical sign. Throws
// DegenerateCircle for point or imaginary circles.
InversiveCircle normalize_circle(const HermitianForm& raw);
inline InversiveCircle normalize_circle(double a, Complex b, double c) {
    return normalize_circle(HermitianForm{a, b, c});
}

// Circle (or line) through three distinct points; infinity may appear once.
InversiveCircle circle_through_points(const ExtPoint& p1, const ExtPoint& p2, const ExtPoint& p3);

// Inversive product; +-1 for tangent circles, 0 for orthogonal ones.
double inversive_product(const InversiveCircle& c1, const InversiveCircle& c2);

enum class Orientation { conformal, anticonformal };

struct Mat2 {
    Complex a{1}, b{0}, c{0}, d{1};

    Complex det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 conj() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
};

// z -> (az + b) / (cz + d), with z conjugated first when anticonformal.
// The matrix is scaled to determinant 1 on construction (defined up to sign).
class MotionMap {
public:
    MotionMap() = default;
    explicit MotionMap(const Mat2& m, Orientation orientation = Orientation::conformal);

    static MotionMap identity() { return {}; }
    // Inversion (reflection) in a circle or line.
    static MotionMap inversion(const InversiveCircle& circle);

    const Mat2& matrix() const { return m_; }
    Orientation orientation() const { return orientation_; }
    bool conformal() const { return orientation_ == Orientation::conformal; }

    MotionMap inverse() const;

    // Same map as a point transformation (matrices equal up to sign).
    bool same_as(const MotionMap& other, double tol = Tolerances::geometric) const;
    // Matrix is unitary, i.e. the map is a rotation of the sphere.
    bool is_rotation(double tol = Tolerances::geometric) const;

private:
    Mat2 m_{};
    Orientation orientation_ = Orientation::conformal;
};

ExtPoint apply_map_point(const MotionMap& g, const ExtPoint& p);
InversiveCircle apply_map_circle(const MotionMap& g, const InversiveCircle& circle);
// Side-preserving congruence of a raw form (no normalization).
HermitianForm apply_map_form(const MotionMap& g, const HermitianForm& form);
// Acts as g1 after g2.
MotionMap compose(const MotionMap& g1, const MotionMap& g2);

Vec3 plane_to_sphere(const ExtPoint& p);
ExtPoint sphere_to_plane(const Vec3& u);

// The circle as seen on S^2: plane {x . normal = offset}, offset >= 0.
struct SphericalCircle {
    Vec3 normal;
    double offset = 0;
    double theta = 0; // spherical radius in (0, pi/2]
};

SphericalCircle to_spherical(const InversiveCircle& circle);
double spherical_curvature(const InversiveCircle& circle);
double hyperbolic_distance_to_center(const InversiveCircle& circle);

// Closed spherical cap: points at angular distance <= radius from center.
struct Cap {
    Vec3 center;
    double radius = 0; // in (0, pi)
};

// Cap occupied by the closed disk {form <= 0}.
Cap disk_cap(const HermitianForm& form);

} // namespace census
