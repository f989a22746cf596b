#include "census/geometry.hpp"

#include <limits>

#include <algorithm>
#include <string>

namespace census {

double angle_between(const Vec3& u, const Vec3& v) {
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

InversiveCircle normalize_circle(const HermitianForm& raw) {
    const double disc = raw.discriminant();
    if (!(disc > Tolerances::degenerate)) {
        throw Error(ErrorCode::DegenerateCircle,
                    "circle has |b|^2 - ac = " + std::to_string(disc) + " (point or imaginary circle)");
    }
    // Already normalized up to rounding: keep the coefficients bit for bit.
    const double noise = 8 * std::numeric_limits<double>::epsilon() * (std::norm(raw.b) + std::abs(raw.a * raw.c));
    const double scale = std::abs(disc - 1.0) <= noise ? 1.0 : 1.0 / std::sqrt(disc);
    return detail::with_canonical_sign(raw.a * scale, raw.b * scale, raw.c * scale);
}

InversiveCircle detail::with_canonical_sign(double a, Complex b, double c) {
    constexpr double tol = Tolerances::invariant;
    bool flip = false;
    const double sum = a + c;
    if (std::abs(sum) >= tol) {
        flip = sum < 0;
    } else if (std::abs(a) >= tol) {
        flip = a < 0;
    } else {
        // arg(b) in [0, pi)
        flip = b.imag() < -tol || (std::abs(b.imag()) <= tol && b.real() < 0);
    }
    if (flip) {
        a = -a;
        b = -b;
        c = -c;
    }
    return InversiveCircle(a, b, c);
}

InversiveCircle InversiveCircle::from_center_radius(Complex center, double radius) {
    return normalize_circle(HermitianForm::disk(center, radius));
}

namespace {

using Row = std::array<double, 4>;

Row incidence_row(const ExtPoint& p) {
    if (p.at_infinity) return {1, 0, 0, 0};
    return {std::norm(p.z), 2 * p.z.real(), 2 * p.z.imag(), 1};
}

double det3(const Row& r0, const Row& r1, const Row& r2, int skip) {
    std::array<std::array<double, 3>, 3> m{};
    const Row* rows[3] = {&r0, &r1, &r2};
    for (int i = 0; i < 3; ++i) {
        int k = 0;
        for (int j = 0; j < 4; ++j) {
            if (j != skip) m[i][k++] = (*rows[i])[j];
        }
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool coincide(const ExtPoint& p, const ExtPoint& q) {
    if (p.at_infinity || q.at_infinity) return p.at_infinity && q.at_infinity;
    return std::abs(p.z - q.z) < Tolerances::invariant;
}

} // namespace

InversiveCircle circle_through_points(const ExtPoint& p1, const ExtPoint& p2, const ExtPoint& p3) {
    if (coincide(p1, p2) || coincide(p1, p3) || coincide(p2, p3)) {
        throw Error(ErrorCode::DegenerateInput, "circle_through_points: coincident points");
    }
    const Row r0 = incidence_row(p1), r1 = incidence_row(p2), r2 = incidence_row(p3);
    // Null vector of the 3x4 incidence system by signed 3x3 minors.
    const double a = det3(r0, r1, r2, 0);
    const double b_re = -det3(r0, r1, r2, 1);
    const double b_im = det3(r0, r1, r2, 2);
    const double c = -det3(r0, r1, r2, 3);
    return normalize_circle(a, Complex(b_re, b_im), c);
}

double inversive_product(const InversiveCircle& c1, const InversiveCircle& c2) {
    return (c1.b() * std::conj(c2.b())).real() - 0.5 * (c1.a() * c2.c() + c2.a() * c1.c());
}

MotionMap::MotionMap(const Mat2& m, Orientation orientation) : orientation_(orientation) {
    const Complex det = m.det();
    if (!(std::abs(det) > Tolerances::degenerate)) {
        throw Error(ErrorCode::DegenerateInput, "MotionMap: singular matrix");
    }
    const Complex s = std::sqrt(det);
    m_ = {m.a / s, m.b / s, m.c / s, m.d / s};
}

MotionMap MotionMap::inversion(const InversiveCircle& circle) {
    // z -> (-b conj(z) - c) / (a conj(z) + conj(b)), determinant -1.
    const Mat2 m{-circle.b(), Complex(-circle.c()), Complex(circle.a()), std::conj(circle.b())};
    return MotionMap(m, Orientation::anticonformal);
}

MotionMap MotionMap::inverse() const {
    Mat2 inv{m_.d, -m_.b, -m_.c, m_.a};
    if (!conformal()) inv = inv.conj();
    MotionMap out;
    out.m_ = inv;
    out.orientation_ = orientation_;
    return out;
}

bool MotionMap::same_as(const MotionMap& other, double tol) const {
    if (orientation_ != other.orientation_) return false;
    const std::array<Complex, 4> x{m_.a, m_.b, m_.c, m_.d};
    const std::array<Complex, 4> y{other.m_.a, other.m_.b, other.m_.c, other.m_.d};
    double scale = 1.0;
    for (const auto& v : x) scale = std::max(scale, std::abs(v));
    bool plus = true, minus = true;
    for (std::size_t i = 0; i < 4; ++i) {
        plus = plus && std::abs(x[i] - y[i]) <= tol * scale;
        minus = minus && std::abs(x[i] + y[i]) <= tol * scale;
    }
    return plus || minus;
}

bool MotionMap::is_rotation(double tol) const {
    // m m^H == I
    const Complex p11 = m_.a * std::conj(m_.a) + m_.b * std::conj(m_.b);
    const Complex p12 = m_.a * std::conj(m_.c) + m_.b * std::conj(m_.d);
    const Complex p22 = m_.c * std::conj(m_.c) + m_.d * std::conj(m_.d);
    return std::abs(p11 - 1.0) <= tol && std::abs(p12) <= tol && std::abs(p22 - 1.0) <= tol;
}

ExtPoint apply_map_point(const MotionMap& g, const ExtPoint& p) {
    const Mat2& m = g.matrix();
    if (p.at_infinity) {
        if (m.c == Complex(0)) return ExtPoint::infinity();
        return ExtPoint(m.a / m.c);
    }
    const Complex w = g.conformal() ? p.z : std::conj(p.z);
    const Complex den = m.c * w + m.d;
    if (den == Complex(0)) return ExtPoint::infinity();
    return ExtPoint((m.a * w + m.b) / den);
}

HermitianForm apply_map_form(const MotionMap& g, const HermitianForm& form) {
    const double a = form.a, c = form.c;
    // z -> conj(z) transposes the Hermitian matrix.
    const Complex b = g.conformal() ? form.b : std::conj(form.b);
    const Mat2& m = g.matrix();
    // h = m^{-1}; result is h^H M h.
    const Complex p = m.d, q = -m.b, r = -m.c, s = m.a;
    const Complex col1_top = a * p + b * r, col1_bot = std::conj(b) * p + c * r;
    const Complex col2_top = a * q + b * s, col2_bot = std::conj(b) * q + c * s;
    HermitianForm out;
    out.a = (std::conj(p) * col1_top + std::conj(r) * col1_bot).real();
    out.b = std::conj(p) * col2_top + std::conj(r) * col2_bot;
    out.c = (std::conj(q) * col2_top + std::conj(s) * col2_bot).real();
    return out;
}

InversiveCircle apply_map_circle(const MotionMap& g, const InversiveCircle& circle) {
    // Congruence scales |b|^2 - ac by |det|^2; dividing by |det| avoids the
    // cancellation in recomputing the discriminant of a large-curvature circle.
    const HermitianForm f = apply_map_form(g, circle.form());
    const double scale = 1.0 / std::abs(g.matrix().det());
    return detail::with_canonical_sign(f.a * scale, f.b * scale, f.c * scale);
}

MotionMap compose(const MotionMap& g1, const MotionMap& g2) {
    const Mat2 right = g1.conformal() ? g2.matrix() : g2.matrix().conj();
    const bool anti = g1.conformal() != g2.conformal();
    return MotionMap(g1.matrix() * right, anti ? Orientation::anticonformal : Orientation::conformal);
}

Vec3 plane_to_sphere(const ExtPoint& p) {
    if (p.at_infinity) return {0, 0, 1};
    const double s = std::norm(p.z);
    const double k = 1.0 / (s + 1.0);
    return {2 * p.z.real() * k, 2 * p.z.imag() * k, (s - 1.0) * k};
}

ExtPoint sphere_to_plane(const Vec3& u) {
    const double rho2 = u.x * u.x + u.y * u.y;
    if (u.z > 0) {
        if (rho2 == 0) return ExtPoint::infinity();
        // 1 - z = rho^2 / (1 + z) on the sphere; avoids cancellation near the pole.
        return ExtPoint(Complex(u.x, u.y) * ((1.0 + u.z) / rho2));
    }
    return ExtPoint(Complex(u.x, u.y) / (1.0 - u.z));
}

SphericalCircle to_spherical(const InversiveCircle& circle) {
    const double sum = circle.a() + circle.c();
    const Vec3 m{2 * circle.b().real(), 2 * circle.b().imag(), circle.a() - circle.c()};
    // Plane m . x = -(a + c); orient the normal so the offset is non-negative.
    SphericalCircle out;
    out.normal = (sum >= 0 ? -m : m).normalized();
    out.offset = std::abs(sum) / std::hypot(sum, 2.0);
    out.theta = std::atan2(2.0, std::abs(sum));
    return out;
}

double spherical_curvature(const InversiveCircle& circle) {
    return std::abs(circle.a() + circle.c()) / 2.0;
}

double hyperbolic_distance_to_center(const InversiveCircle& circle) {
    return std::asinh(spherical_curvature(circle));
}

Cap disk_cap(const HermitianForm& form) {
    const double disc = form.discriminant();
    if (!(disc > Tolerances::degenerate)) {
        throw Error(ErrorCode::DegenerateCircle, "disk_cap: degenerate disk");
    }
    const double k = 1.0 / std::sqrt(disc);
    const double a = form.a * k, c = form.c * k;
    const Complex b = form.b * k;
    // {form <= 0} is {x : u . x >= (a + c) / |m|} with u = -m / |m|.
    const Vec3 m{2 * b.real(), 2 * b.imag(), a - c};
    return {(-m).normalized(), std::atan2(2.0, a + c)};
}

} // namespace census
