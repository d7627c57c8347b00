// SPDX-License-Identifier: Apache-2.0
/**
 * @file oracles.hpp
 * @brief Slow brute-force references for the closed-form operations
 *
 * Nothing here calls the routine it cross-checks: the mirror oracle sweeps
 * normals and reflects rays itself, the Q oracle integrates the normal
 * density, and the occlusion oracle samples points along the segment.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

#include "errors.hpp"
#include "geometry.hpp"

namespace irsvlc::oracles {

namespace detail {
inline Vec3 unit(Vec3 const& v) { return v / norm(v); }

// Received-power proxy of a mirror with normal n at c: zero unless source
// and destination are in front; otherwise the cosine between the reflected
// ray and the direction to dst (1 exactly at specular alignment).
inline double alignment_objective(Vec3 const& src, Vec3 const& c, Vec3 const& dst, Vec3 const& n)
{
    Vec3 to_src = unit(src - c);
    Vec3 to_dst = unit(dst - c);
    double a = dot(to_src, n);
    if (a <= 0.0 || dot(to_dst, n) <= 0.0) {
        return 0.0;
    }
    // incoming direction is -to_src; outgoing = -to_src + 2 a n
    Vec3 out = n * (2.0 * a) - to_src;
    return dot(unit(out), to_dst);
}

inline void tangent_basis(Vec3 const& n, Vec3& e1, Vec3& e2)
{
    Vec3 helper = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    e1 = unit(cross(n, helper));
    e2 = cross(n, e1);
}
} // namespace detail

/**
 * @brief Exhaustive search for the mirror normal steering src -> dst
 *
 * Sweeps the hemisphere around rest_normal on a coarse_step_deg grid of
 * polar and azimuth angles, then refines twice on local tangent grids with
 * step/10 and step/100.
 */
inline UnitVec3 grid_search_mirror_normal(Vec3 const& src, Vec3 const& elem_center,
                                          Vec3 const& dst, UnitVec3 const& rest_normal,
                                          double coarse_step_deg = 2.0)
{
    if (!(coarse_step_deg > 0.0 && coarse_step_deg <= 5.0)) {
        throw ArgumentError("grid_search_mirror_normal: coarse step must lie in (0, 5] degrees");
    }
    auto objective = [&](Vec3 const& n) {
        return detail::alignment_objective(src, elem_center, dst, n);
    };
    Vec3 e1, e2;
    detail::tangent_basis(rest_normal.vec(), e1, e2);
    Vec3 best = rest_normal.vec();
    double best_val = objective(best);

    double step = deg_to_rad(coarse_step_deg);
    auto n_polar = static_cast<int>(std::ceil((std::numbers::pi / 2) / step));
    auto n_az = static_cast<int>(std::ceil(2 * std::numbers::pi / step));
    for (int i = 1; i < n_polar; ++i) {
        double polar = i * step;
        for (int j = 0; j < n_az; ++j) {
            double az = j * step;
            Vec3 n = rest_normal.vec() * std::cos(polar)
                     + (e1 * std::cos(az) + e2 * std::sin(az)) * std::sin(polar);
            double v = objective(n);
            if (v > best_val) {
                best_val = v;
                best = n;
            }
        }
    }

    for (double refine : {step / 10.0, step / 100.0}) {
        Vec3 center = best;
        Vec3 t1, t2;
        detail::tangent_basis(center, t1, t2);
        for (int a = -20; a <= 20; ++a) {
            for (int b = -20; b <= 20; ++b) {
                Vec3 n = detail::unit(center + t1 * std::tan(a * refine) + t2 * std::tan(b * refine));
                double v = objective(n);
                if (v > best_val) {
                    best_val = v;
                    best = n;
                }
            }
        }
    }
    return UnitVec3::normalize(best);
}

namespace detail {
inline double adaptive_simpson(std::function<double(double)> const& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth)
{
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    // floor keeps the recursion finite once rounding noise dominates
    double sub_tol = std::max(0.5 * tol, 1e-17);
    return adaptive_simpson(f, a, m, fa, flm, fm, left, sub_tol, depth - 1)
           + adaptive_simpson(f, m, b, fm, frm, fb, right, sub_tol, depth - 1);
}

inline double integrate(std::function<double(double)> const& f, double a, double b, double tol)
{
    double fa = f(a);
    double fb = f(b);
    double fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}
} // namespace detail

/// Gaussian tail by adaptive quadrature of the standard normal density.
inline double q_numeric(double x)
{
    if (!(std::abs(x) <= 40.0)) {
        throw ArgumentError("q_numeric: |x| must not exceed 40");
    }
    auto density = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2 * std::numbers::pi); };
    // Split at unit intervals so each piece is smooth on its own scale.
    double upper = std::max(x, 0.0) + 40.0;
    double total = 0.0;
    for (double a = x; a < upper; a += 1.0) {
        total += detail::integrate(density, a, std::min(a + 1.0, upper), 1e-15);
    }
    return total;
}

namespace detail {
inline bool strictly_inside(Vec3 const& p, OrientedBox const& box)
{
    double c = std::cos(box.yaw());
    double s = std::sin(box.yaw());
    Vec3 d = p - box.center();
    double u = c * d.x + s * d.y;
    double v = -s * d.x + c * d.y;
    Vec3 const& h = box.half_extents();
    return std::abs(u) < h.x && std::abs(v) < h.y && std::abs(d.z) < h.z;
}

// Exact signed distance from p to the box surface (negative inside).
inline double signed_distance(Vec3 const& p, OrientedBox const& box)
{
    double c = std::cos(box.yaw());
    double s = std::sin(box.yaw());
    Vec3 d = p - box.center();
    Vec3 const& h = box.half_extents();
    double q[3] = {std::abs(c * d.x + s * d.y) - h.x, std::abs(-s * d.x + c * d.y) - h.y,
                   std::abs(d.z) - h.z};
    double outside = std::hypot(std::max(q[0], 0.0), std::max(q[1], 0.0), std::max(q[2], 0.0));
    double inside = std::min(std::max({q[0], q[1], q[2]}), 0.0);
    return outside + inside;
}
} // namespace detail

/// True iff one of `samples` evenly spaced interior points of p->q is inside the box.
inline bool
point_sample_occlusion(Vec3 const& p, Vec3 const& q, OrientedBox const& box, std::size_t samples)
{
    if (samples < 1000) {
        throw ArgumentError("point_sample_occlusion: need at least 1000 samples");
    }
    auto const denom = static_cast<double>(samples + 1);
    for (std::size_t i = 1; i <= samples; ++i) {
        double t = static_cast<double>(i) / denom;
        if (detail::strictly_inside(p + (q - p) * t, box)) {
            return true;
        }
    }
    return false;
}

/**
 * @brief Minimum signed distance from the segment to the box surface
 *
 * The signed distance to a convex set is convex along a line, so a ternary
 * search finds the minimum. Magnitudes below ~1e-6 mark near-tangent cases.
 */
inline double segment_clearance(Vec3 const& p, Vec3 const& q, OrientedBox const& box)
{
    auto f = [&](double t) { return detail::signed_distance(p + (q - p) * t, box); };
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) < f(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return f(0.5 * (lo + hi));
}

} // namespace irsvlc::oracles
