// SPDX-License-Identifier: Apache-2.0
/**
 * @file channel.hpp
 * @brief DC channel gains: Lambertian LOS, diffuse wall reflections, blockage
 */
#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "devices.hpp"
#include "geometry.hpp"
#include "numeric.hpp"

namespace irsvlc {

/// The four vertical walls of a room.
enum class Wall { West = 0, East = 1, South = 2, North = 3 };

inline constexpr std::array<Wall, 4> all_walls{Wall::West, Wall::East, Wall::South, Wall::North};

inline char const* to_string(Wall w)
{
    switch (w) {
    case Wall::West: return "west";
    case Wall::East: return "east";
    case Wall::South: return "south";
    case Wall::North: return "north";
    }
    return "?";
}

/**
 * @brief Local frame of a wall
 *
 * Points on the wall are origin + s * horizontal + z * up for s in
 * [0, span] and z in [0, room height].
 */
struct WallFrame {
    Vec3 origin;
    UnitVec3 horizontal;
    UnitVec3 inward;
    double span = 0.0;

    Vec3 point(double s, double z) const
    {
        return origin + horizontal.vec() * s + Vec3{0, 0, z};
    }
};

inline WallFrame wall_frame(Room const& room, Wall w)
{
    switch (w) {
    case Wall::West: return {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, room.width};
    case Wall::East: return {{room.length, 0, 0}, {0, 1, 0}, {-1, 0, 0}, room.width};
    case Wall::South: return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, room.length};
    case Wall::North: return {{0, room.width, 0}, {1, 0, 0}, {0, -1, 0}, room.length};
    }
    throw ArgumentError("wall_frame: unknown wall");
}

struct WallPatch {
    Vec3 center;
    UnitVec3 normal; //!< inward
    double area = 0.0;
    double reflectivity = 0.7;
    Wall wall = Wall::West;
    UnitVec3 horizontal{1, 0, 0}; //!< in-plane width direction
    double width = 0.0;
    double height = 0.0;
};

struct ChannelGain {
    double value = 0.0;
};

/// True iff the segment p->q passes through any blocker.
inline bool shadowed(Vec3 const& p, Vec3 const& q, std::span<OrientedBox const> blockers)
{
    if (blockers.empty()) {
        return false;
    }
    Segment seg(p, q);
    for (auto const& box : blockers) {
        if (segment_intersects_box(seg, box)) {
            return true;
        }
    }
    return false;
}

namespace detail {
// Receiver acceptance: front-facing and inside the field of view.
inline bool in_fov(PhotoDetector const& ue, double cos_incident)
{
    return cos_incident > 0.0 && cos_incident >= std::cos(ue.fov);
}
} // namespace detail

/// Direct-path Lambertian gain; zero outside the FOV or when blocked.
inline ChannelGain
los_gain(Luminaire const& ap, PhotoDetector const& ue, std::span<OrientedBox const> blockers)
{
    Vec3 to_ue = ue.position - ap.position;
    double d_sq = norm_squared(to_ue);
    if (!(d_sq > 0.0)) {
        throw ArgumentError("los_gain: access point and receiver coincide");
    }
    double d = std::sqrt(d_sq);
    double cos_emit = dot(ap.normal.vec(), to_ue) / d;
    double cos_inc = -dot(ue.normal.vec(), to_ue) / d;
    if (!(cos_emit > 0.0) || !detail::in_fov(ue, cos_inc)) {
        return {};
    }
    if (shadowed(ap.position, ue.position, blockers)) {
        return {};
    }
    return {lambertian_gain(ap.lambertian_order, ue.area, d_sq, cos_emit, cos_inc)};
}

/**
 * @brief Tile the four walls with near-square patches
 *
 * Each wall is split into ceil(span / target) by ceil(height / target)
 * equal rectangles, so no patch side exceeds the target.
 */
inline std::vector<WallPatch>
wall_patches(Room const& room, double patch_target_size, double reflectivity = 0.7)
{
    if (!(patch_target_size > 0.0)) {
        throw ArgumentError("wall_patches: patch size must be positive");
    }
    std::vector<WallPatch> patches;
    for (Wall w : all_walls) {
        WallFrame f = wall_frame(room, w);
        auto nu = static_cast<std::size_t>(std::ceil(f.span / patch_target_size - 1e-12));
        auto nv = static_cast<std::size_t>(std::ceil(room.height / patch_target_size - 1e-12));
        nu = std::max<std::size_t>(nu, 1);
        nv = std::max<std::size_t>(nv, 1);
        double du = f.span / static_cast<double>(nu);
        double dv = room.height / static_cast<double>(nv);
        for (std::size_t j = 0; j < nv; ++j) {
            for (std::size_t i = 0; i < nu; ++i) {
                patches.push_back({f.point((static_cast<double>(i) + 0.5) * du,
                                           (static_cast<double>(j) + 0.5) * dv),
                                   f.inward, du * dv, reflectivity, w, f.horizontal, du, dv});
            }
        }
    }
    return patches;
}

namespace detail {
// Gain AP -> patch (fraction of emitted power landing on the patch),
// zero when the patch is behind the AP, faces away or the leg is blocked.
inline double ap_to_patch(Luminaire const& ap, WallPatch const& patch,
                          std::span<OrientedBox const> blockers)
{
    Vec3 v = patch.center - ap.position;
    double d_sq = norm_squared(v);
    double d = std::sqrt(d_sq);
    double cos_emit = dot(ap.normal.vec(), v) / d;
    double cos_in = -dot(patch.normal.vec(), v) / d;
    if (!(cos_emit > 0.0) || !(cos_in > 0.0)) {
        return 0.0;
    }
    if (shadowed(ap.position, patch.center, blockers)) {
        return 0.0;
    }
    return lambertian_gain(ap.lambertian_order, patch.area, d_sq, cos_emit, cos_in);
}

// Gain of a patch re-radiating as a first-order Lambertian source toward
// the receiver, per unit power incident on the patch.
inline double patch_to_ue(WallPatch const& patch, PhotoDetector const& ue,
                          std::span<OrientedBox const> blockers)
{
    Vec3 v = ue.position - patch.center;
    double d_sq = norm_squared(v);
    double d = std::sqrt(d_sq);
    double cos_out = dot(patch.normal.vec(), v) / d;
    double cos_in = -dot(ue.normal.vec(), v) / d;
    if (!(cos_out > 0.0) || !in_fov(ue, cos_in)) {
        return 0.0;
    }
    if (shadowed(patch.center, ue.position, blockers)) {
        return 0.0;
    }
    return patch.reflectivity * cos_out / (std::numbers::pi * d_sq) * ue.area * cos_in;
}

// Patch i -> patch j transfer per unit power incident on i.
inline double patch_to_patch(WallPatch const& from, WallPatch const& to,
                             std::span<OrientedBox const> blockers)
{
    Vec3 v = to.center - from.center;
    double d_sq = norm_squared(v);
    double d = std::sqrt(d_sq);
    double cos_out = dot(from.normal.vec(), v) / d;
    double cos_in = -dot(to.normal.vec(), v) / d;
    if (!(cos_out > 1e-12) || !(cos_in > 1e-12)) {
        return 0.0;
    }
    if (shadowed(from.center, to.center, blockers)) {
        return 0.0;
    }
    return from.reflectivity * cos_out / (std::numbers::pi * d_sq) * to.area * cos_in;
}
} // namespace detail

namespace detail {
inline constexpr int max_patch_refinement = 5;

// Whether the receiver accepts light re-radiated from point p on the wall.
inline bool accepts_from(Vec3 const& p, UnitVec3 const& wall_normal, PhotoDetector const& ue)
{
    Vec3 v = ue.position - p;
    double d = norm(v);
    if (!(d > 0.0)) {
        return false;
    }
    return dot(wall_normal.vec(), v) > 0.0 && in_fov(ue, -dot(ue.normal.vec(), v) / d);
}

inline std::array<WallPatch, 4> split(WallPatch const& p)
{
    std::array<WallPatch, 4> out;
    double w = 0.5 * p.width;
    double h = 0.5 * p.height;
    std::size_t k = 0;
    for (double sv : {-0.5, 0.5}) {
        for (double su : {-0.5, 0.5}) {
            WallPatch q = p;
            q.center = p.center + p.horizontal.vec() * (su * w) + Vec3{0, 0, sv * h};
            q.width = w;
            q.height = h;
            q.area = w * h;
            out[k++] = q;
        }
    }
    return out;
}

// Midpoint contribution of one patch, subdivided while the receiver is in
// its near field or the FOV boundary cuts across it.
inline void first_order_terms(Luminaire const& ap, PhotoDetector const& ue, WallPatch const& patch,
                              std::span<OrientedBox const> blockers, int depth,
                              std::vector<double>& terms)
{
    if (depth > 0 && patch.width > 0.0 && patch.height > 0.0) {
        double size = std::max(patch.width, patch.height);
        bool near = size > 0.5 * distance(patch.center, ue.position)
                    || size > 0.5 * distance(patch.center, ap.position);
        bool edge = false;
        if (!near) {
            bool mid = accepts_from(patch.center, patch.normal, ue);
            Vec3 du = patch.horizontal.vec() * (0.5 * patch.width);
            Vec3 dv{0, 0, 0.5 * patch.height};
            for (Vec3 corner : {patch.center + du + dv, patch.center + du - dv,
                                patch.center - du + dv, patch.center - du - dv}) {
                edge = edge || accepts_from(corner, patch.normal, ue) != mid;
            }
        }
        if (near || edge) {
            for (WallPatch const& sub : split(patch)) {
                first_order_terms(ap, ue, sub, blockers, depth - 1, terms);
            }
            return;
        }
    }
    double leg2 = patch_to_ue(patch, ue, blockers);
    if (leg2 == 0.0) {
        return;
    }
    double leg1 = ap_to_patch(ap, patch, blockers);
    if (leg1 > 0.0) {
        terms.push_back(leg1 * leg2);
    }
}
} // namespace detail

/**
 * @brief First-order diffuse wall reflection gain
 *
 * Patches are integrated with the midpoint rule, refined locally near the
 * receiver and across its FOV boundary. Terms are summed after sorting so
 * the result does not depend on patch enumeration order.
 */
inline ChannelGain nlos_gain(Luminaire const& ap, PhotoDetector const& ue,
                             std::span<WallPatch const> patches,
                             std::span<OrientedBox const> blockers)
{
    std::vector<double> terms;
    terms.reserve(patches.size());
    for (auto const& patch : patches) {
        if (patch.reflectivity <= 0.0) {
            continue;
        }
        detail::first_order_terms(ap, ue, patch, blockers, detail::max_patch_refinement, terms);
    }
    return {sorted_compensated_sum(std::move(terms))};
}

/// Second-order diffuse contribution (AP -> patch -> patch -> UE).
inline ChannelGain nlos_gain_second_order(Luminaire const& ap, PhotoDetector const& ue,
                                          std::span<WallPatch const> patches,
                                          std::span<OrientedBox const> blockers)
{
    std::vector<double> first(patches.size());
    std::vector<double> last(patches.size());
    for (std::size_t i = 0; i < patches.size(); ++i) {
        first[i] = detail::ap_to_patch(ap, patches[i], blockers);
        last[i] = detail::patch_to_ue(patches[i], ue, blockers);
    }
    std::vector<double> terms;
    for (std::size_t i = 0; i < patches.size(); ++i) {
        if (first[i] == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < patches.size(); ++j) {
            if (i == j || last[j] == 0.0) {
                continue;
            }
            double t = detail::patch_to_patch(patches[i], patches[j], blockers);
            if (t > 0.0) {
                terms.push_back(first[i] * t * last[j]);
            }
        }
    }
    return {sorted_compensated_sum(std::move(terms))};
}

} // namespace irsvlc
