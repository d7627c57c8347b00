// SPDX-License-Identifier: Apache-2.0
/**
 * @file geometry.hpp
 * @brief 3D primitives: vectors, directions, reflection and box occlusion
 *
 * Global frame: z up, floor at z = 0, one room corner at the origin.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace irsvlc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(Vec3 const& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(Vec3 const& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3& operator+=(Vec3 const& o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr bool operator==(Vec3 const&) const = default;
};

constexpr Vec3 operator*(double s, Vec3 const& v) { return v * s; }

constexpr double dot(Vec3 const& a, Vec3 const& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 const& a, Vec3 const& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 const& v) { return std::sqrt(dot(v, v)); }
constexpr double norm_squared(Vec3 const& v) { return dot(v, v); }
inline double distance(Vec3 const& a, Vec3 const& b) { return norm(a - b); }

inline bool is_finite(Vec3 const& v)
{
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/**
 * @brief Direction with unit Euclidean norm
 *
 * Construction either normalizes an arbitrary nonzero vector or checks
 * that the given components already have unit norm (within 1e-9).
 */
class UnitVec3 {
  public:
    static constexpr double norm_tolerance = 1e-9;

    UnitVec3() = default;

    UnitVec3(double x, double y, double z) : v_{x, y, z}
    {
        double n = norm(v_);
        if (!(std::abs(n - 1.0) <= norm_tolerance)) {
            throw ArgumentError("UnitVec3: components do not have unit norm");
        }
    }

    static UnitVec3 normalize(Vec3 const& v)
    {
        double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw ArgumentError("UnitVec3: cannot normalize a zero or non-finite vector");
        }
        UnitVec3 u;
        u.v_ = v / n;
        return u;
    }

    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double z() const { return v_.z; }
    Vec3 const& vec() const { return v_; }
    operator Vec3 const&() const { return v_; }

    UnitVec3 operator-() const
    {
        UnitVec3 u;
        u.v_ = -v_;
        return u;
    }

    bool operator==(UnitVec3 const&) const = default;

  private:
    Vec3 v_{0.0, 0.0, 1.0};
};

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Cosine of the angle between two directions, clamped to [-1, 1].
inline double cos_between(UnitVec3 const& u, UnitVec3 const& v)
{
    return std::clamp(dot(u.vec(), v.vec()), -1.0, 1.0);
}

/**
 * @brief Normal of a device tilted by polar angle theta from vertical and
 * rotated by azimuth omega
 *
 * Returns (sin t cos w, sin t sin w, cos t); theta = 0 faces straight up.
 */
inline UnitVec3 unit_normal_from_polar(double theta, double omega)
{
    constexpr double half_pi = std::numbers::pi / 2;
    constexpr double two_pi = 2 * std::numbers::pi;
    if (!(theta >= 0.0 && theta <= half_pi)) {
        throw ArgumentError("unit_normal_from_polar: polar angle outside [0, pi/2]");
    }
    if (!(omega >= 0.0 && omega < two_pi)) {
        throw ArgumentError("unit_normal_from_polar: azimuth outside [0, 2pi)");
    }
    double s = std::sin(theta);
    return UnitVec3::normalize({s * std::cos(omega), s * std::sin(omega), std::cos(theta)});
}

/// Specular reflection of incident direction d off a surface with normal n.
inline UnitVec3 reflect(UnitVec3 const& d, UnitVec3 const& n)
{
    double dn = dot(d.vec(), n.vec());
    if (!(dn < 0.0)) {
        throw ArgumentError("reflect: back-face incidence");
    }
    return UnitVec3::normalize(d.vec() - n.vec() * (2.0 * dn));
}

struct Segment {
    Vec3 a;
    Vec3 b;

    Segment(Vec3 const& from, Vec3 const& to) : a(from), b(to)
    {
        if (a == b) {
            throw ArgumentError("Segment: endpoints coincide");
        }
    }
};

/**
 * @brief Box with a vertical z axis, rotated by yaw about that axis
 *
 * The yaw rotation is cached alongside a conservative axis-aligned bound so
 * that occlusion queries over many segments stay cheap.
 */
class OrientedBox {
  public:
    OrientedBox(Vec3 const& center, Vec3 const& half_extents, double yaw)
        : center_(center), half_(half_extents), yaw_(yaw)
    {
        if (!(half_.x > 0 && half_.y > 0 && half_.z > 0)) {
            throw ArgumentError("OrientedBox: half extents must be positive");
        }
        if (!(yaw >= 0.0 && yaw < std::numbers::pi)) {
            throw ArgumentError("OrientedBox: yaw outside [0, pi)");
        }
        cos_ = std::cos(yaw);
        sin_ = std::sin(yaw);
        radius_xy_ = std::hypot(half_.x, half_.y);
    }

    Vec3 const& center() const { return center_; }
    Vec3 const& half_extents() const { return half_; }
    double yaw() const { return yaw_; }

    /// World-frame point expressed in the box frame (origin at center).
    Vec3 to_local(Vec3 const& p) const
    {
        double dx = p.x - center_.x;
        double dy = p.y - center_.y;
        return {cos_ * dx + sin_ * dy, -sin_ * dx + cos_ * dy, p.z - center_.z};
    }

    /// Direction expressed in the box frame.
    Vec3 rotate_to_local(Vec3 const& d) const
    {
        return {cos_ * d.x + sin_ * d.y, -sin_ * d.x + cos_ * d.y, d.z};
    }

    /// Strict interior test.
    bool contains(Vec3 const& p) const
    {
        Vec3 l = to_local(p);
        return std::abs(l.x) < half_.x && std::abs(l.y) < half_.y && std::abs(l.z) < half_.z;
    }

    /// True when the segment's bounding box cannot reach the open interior.
    bool bounds_exclude(Vec3 const& a, Vec3 const& b) const
    {
        auto [zlo, zhi] = std::minmax(a.z, b.z);
        if (zhi <= center_.z - half_.z || zlo >= center_.z + half_.z) {
            return true;
        }
        auto [xlo, xhi] = std::minmax(a.x, b.x);
        if (xhi <= center_.x - radius_xy_ || xlo >= center_.x + radius_xy_) {
            return true;
        }
        auto [ylo, yhi] = std::minmax(a.y, b.y);
        return yhi <= center_.y - radius_xy_ || ylo >= center_.y + radius_xy_;
    }

  private:
    Vec3 center_;
    Vec3 half_;
    double yaw_ = 0.0;
    double cos_ = 1.0;
    double sin_ = 0.0;
    double radius_xy_ = 0.0;
};

namespace detail {
// Open segment a->b against the open box interior, both in the box frame.
inline bool slab_intersects(Vec3 const& a, Vec3 const& d, Vec3 const& h)
{
    double lo = 0.0;
    double hi = 1.0;
    double const origin[3] = {a.x, a.y, a.z};
    double const dir[3] = {d.x, d.y, d.z};
    double const half[3] = {h.x, h.y, h.z};
    for (int i = 0; i < 3; ++i) {
        if (dir[i] == 0.0) {
            if (!(std::abs(origin[i]) < half[i])) {
                return false;
            }
            continue;
        }
        double t1 = (-half[i] - origin[i]) / dir[i];
        double t2 = (half[i] - origin[i]) / dir[i];
        if (t1 > t2) {
            std::swap(t1, t2);
        }
        lo = std::max(lo, t1);
        hi = std::min(hi, t2);
        if (!(lo < hi)) {
            return false;
        }
    }
    return lo < hi;
}
} // namespace detail

/**
 * @brief Whether the open segment passes through the box interior
 *
 * Segments that only touch the surface, or end on it, do not intersect.
 */
inline bool segment_intersects_box(Segment const& s, OrientedBox const& box)
{
    if (box.bounds_exclude(s.a, s.b)) {
        return false;
    }
    Vec3 a = box.to_local(s.a);
    Vec3 d = box.rotate_to_local(s.b - s.a);
    return detail::slab_intersects(a, d, box.half_extents());
}

} // namespace irsvlc
