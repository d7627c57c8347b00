// SPDX-License-Identifier: Apache-2.0
/**
 * @file irs.hpp
 * @brief Intelligent reflecting surfaces: mirror arrays and metasurface arrays
 *
 * A mirror element is modelled with the image-source method: the receiver
 * sees the access point mirrored across the element plane, at distance
 * d1 + d2 along the specular path, provided the image->receiver ray passes
 * through the element aperture. A metasurface patch keeps its mounting
 * normal and steers the reflected beam via its phase gradient, so it has no
 * aperture condition but reflects with efficiency below one.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "channel.hpp"
#include "devices.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "numeric.hpp"

namespace irsvlc {

namespace detail {
// Rotate v by the minimal rotation taking unit vector a onto unit vector b.
inline Vec3 rotate_between(Vec3 const& v, UnitVec3 const& a, UnitVec3 const& b)
{
    Vec3 k = cross(a.vec(), b.vec());
    double c = dot(a.vec(), b.vec());
    if (c < -1.0 + 1e-12) {
        // Half turn about any axis orthogonal to a.
        Vec3 axis = std::abs(a.x()) < 0.9 ? cross(a.vec(), {1, 0, 0}) : cross(a.vec(), {0, 1, 0});
        UnitVec3 u = UnitVec3::normalize(axis);
        return u.vec() * (2.0 * dot(u.vec(), v)) - v;
    }
    return v * c + cross(k, v) + k * (dot(k, v) / (1.0 + c));
}
} // namespace detail

/**
 * @brief One rotatable flat mirror of a mirror array
 *
 * The rest pose lies in the wall plane. Re-orienting the mirror rotates its
 * rectangular aperture with the minimal rotation from the rest normal.
 */
struct MirrorElement {
    Vec3 center;
    UnitVec3 normal;      //!< current orientation
    UnitVec3 rest_normal; //!< wall inward normal
    UnitVec3 rest_width_axis;
    UnitVec3 rest_height_axis;
    double width = 0.1;
    double height = 0.06;
    double reflectivity = 0.95;

    MirrorElement oriented(UnitVec3 const& n) const
    {
        MirrorElement e = *this;
        e.normal = n;
        return e;
    }

    UnitVec3 width_axis() const
    {
        return UnitVec3::normalize(detail::rotate_between(rest_width_axis, rest_normal, normal));
    }
    UnitVec3 height_axis() const
    {
        return UnitVec3::normalize(detail::rotate_between(rest_height_axis, rest_normal, normal));
    }
};

/// N x N mirrors on one wall, stored row-major (bottom row first).
struct MirrorArray {
    Wall wall = Wall::West;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<MirrorElement> elements;
};

struct MetasurfacePatch {
    Vec3 center;
    UnitVec3 normal; //!< fixed mounting normal
    double area = 0.006;
    UnitVec3 steering; //!< direction the phase gradient reflects toward
    double efficiency = 0.8;
};

struct MetasurfaceArray {
    Wall wall = Wall::West;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<MetasurfacePatch> patches;
};

/// Per-element view of an IRS link for one receiver.
struct IrsChannelVector {
    std::vector<double> cascaded;      //!< AP -> element -> UE gain
    std::vector<double> ap_to_element; //!< fraction of AP power hitting the element
    std::vector<double> ap_distance;   //!< d1 [m]
    std::vector<double> ue_distance;   //!< d2 [m]
};

/**
 * @brief Mirror normal that reflects light from src at the element center
 * toward dst
 *
 * The bisector of the unit directions toward source and destination.
 */
inline UnitVec3 optimal_mirror_normal(Vec3 const& src, Vec3 const& elem_center, Vec3 const& dst)
{
    if (src == elem_center || dst == elem_center) {
        throw ArgumentError("optimal_mirror_normal: endpoint coincides with element");
    }
    UnitVec3 u = UnitVec3::normalize(src - elem_center);
    UnitVec3 v = UnitVec3::normalize(dst - elem_center);
    Vec3 h = u.vec() + v.vec();
    if (norm(h) < 1e-12) {
        throw DegenerateGeometryError(
            "optimal_mirror_normal: source and destination opposed through element");
    }
    return UnitVec3::normalize(h);
}

namespace detail {
struct LegGeometry {
    double d1 = 0.0;
    double d2 = 0.0;
    double cos_emit = 0.0;
    double cos_incident = 0.0;
};

// Checks shared by mirrors and metasurfaces that do not depend on the
// element orientation: AP forward hemisphere and receiver FOV toward the
// element center. Returns false when either fails.
inline bool leg_geometry(Luminaire const& ap, Vec3 const& center, PhotoDetector const& ue,
                         LegGeometry& out)
{
    Vec3 v1 = center - ap.position;
    Vec3 v2 = center - ue.position;
    out.d1 = norm(v1);
    out.d2 = norm(v2);
    if (!(out.d1 > 0.0) || !(out.d2 > 0.0)) {
        return false;
    }
    out.cos_emit = dot(ap.normal.vec(), v1) / out.d1;
    out.cos_incident = dot(ue.normal.vec(), v2) / out.d2;
    return out.cos_emit > 0.0 && in_fov(ue, out.cos_incident);
}

inline bool legs_blocked(Vec3 const& ap, Vec3 const& center, Vec3 const& ue,
                         std::span<OrientedBox const> blockers)
{
    return shadowed(ap, center, blockers) || shadowed(center, ue, blockers);
}

inline double mirror_gain_impl(Luminaire const& ap, MirrorElement const& elem,
                               PhotoDetector const& ue, std::span<OrientedBox const> blockers,
                               LegGeometry const& g)
{
    Vec3 const& n = elem.normal.vec();
    double ap_side = dot(ap.position - elem.center, n);
    double ue_side = dot(ue.position - elem.center, n);
    if (!(ap_side > 0.0) || !(ue_side > 0.0)) {
        return 0.0;
    }
    Vec3 image = ap.position - n * (2.0 * ap_side);
    Vec3 ray = ue.position - image;
    // image is ap_side behind the plane, receiver ue_side in front
    double t = ap_side / (ap_side + ue_side);
    Vec3 offset = image + ray * t - elem.center;
    if (std::abs(dot(offset, elem.width_axis().vec())) > 0.5 * elem.width
        || std::abs(dot(offset, elem.height_axis().vec())) > 0.5 * elem.height) {
        return 0.0;
    }
    if (legs_blocked(ap.position, elem.center, ue.position, blockers)) {
        return 0.0;
    }
    return elem.reflectivity
           * lambertian_gain(ap.lambertian_order, ue.area, norm_squared(ray), g.cos_emit,
                             g.cos_incident);
}
} // namespace detail

/**
 * @brief Cascaded AP -> mirror -> UE gain for the mirror's current normal
 *
 * Zero unless the AP and UE are in front of the mirror, the element is in
 * the AP's forward hemisphere and the UE's FOV, the image->UE ray crosses
 * the mirror aperture, and neither leg is blocked.
 */
inline ChannelGain mirror_element_gain(Luminaire const& ap, MirrorElement const& elem,
                                       PhotoDetector const& ue,
                                       std::span<OrientedBox const> blockers)
{
    detail::LegGeometry g;
    if (!detail::leg_geometry(ap, elem.center, ue, g)) {
        return {};
    }
    return {detail::mirror_gain_impl(ap, elem, ue, blockers, g)};
}

/// Gains of every mirror after steering each one toward the UE.
inline IrsChannelVector mirror_channel_vector(Luminaire const& ap, MirrorArray const& array,
                                              PhotoDetector const& ue,
                                              std::span<OrientedBox const> blockers)
{
    IrsChannelVector out;
    std::size_t n = array.elements.size();
    out.cascaded.assign(n, 0.0);
    out.ap_to_element.assign(n, 0.0);
    out.ap_distance.assign(n, 0.0);
    out.ue_distance.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        MirrorElement const& rest = array.elements[i];
        detail::LegGeometry g;
        bool visible = detail::leg_geometry(ap, rest.center, ue, g);
        out.ap_distance[i] = g.d1;
        out.ue_distance[i] = g.d2;
        if (!visible) {
            continue;
        }
        MirrorElement e =
            rest.oriented(optimal_mirror_normal(ap.position, rest.center, ue.position));
        double cos_hit = dot(e.normal.vec(), ap.position - e.center) / g.d1;
        out.ap_to_element[i] = lambertian_gain(ap.lambertian_order, e.width * e.height,
                                               g.d1 * g.d1, g.cos_emit, cos_hit);
        out.cascaded[i] = detail::mirror_gain_impl(ap, e, ue, blockers, g);
    }
    return out;
}

/// Total mirror-array gain, summed in row-major element order.
inline ChannelGain ma_gain(Luminaire const& ap, MirrorArray const& array, PhotoDetector const& ue,
                           std::span<OrientedBox const> blockers)
{
    CompensatedSum total;
    for (MirrorElement const& rest : array.elements) {
        detail::LegGeometry g;
        if (!detail::leg_geometry(ap, rest.center, ue, g)) {
            continue;
        }
        MirrorElement e =
            rest.oriented(optimal_mirror_normal(ap.position, rest.center, ue.position));
        total.add(detail::mirror_gain_impl(ap, e, ue, blockers, g));
    }
    return {total.value()};
}

/// Gain of one metasurface patch steered toward the UE.
inline ChannelGain msa_patch_gain(Luminaire const& ap, MetasurfacePatch const& patch,
                                  PhotoDetector const& ue, std::span<OrientedBox const> blockers)
{
    if (patch.efficiency <= 0.0) {
        return {};
    }
    detail::LegGeometry g;
    if (!detail::leg_geometry(ap, patch.center, ue, g)) {
        return {};
    }
    Vec3 const& n = patch.normal.vec();
    if (!(dot(ap.position - patch.center, n) > 0.0)
        || !(dot(ue.position - patch.center, n) > 0.0)) {
        return {};
    }
    if (detail::legs_blocked(ap.position, patch.center, ue.position, blockers)) {
        return {};
    }
    double path = g.d1 + g.d2;
    return {patch.efficiency
            * lambertian_gain(ap.lambertian_order, ue.area, path * path, g.cos_emit,
                              g.cos_incident)};
}

/// Total metasurface-array gain; each patch's steering is set toward the UE.
inline ChannelGain msa_gain(Luminaire const& ap, MetasurfaceArray& array, PhotoDetector const& ue,
                            std::span<OrientedBox const> blockers)
{
    CompensatedSum total;
    for (MetasurfacePatch& p : array.patches) {
        if (p.center != ue.position) {
            p.steering = UnitVec3::normalize(ue.position - p.center);
        }
        total.add(msa_patch_gain(ap, p, ue, blockers).value);
    }
    return {total.value()};
}

/// Non-mutating variant for shared scenes.
inline ChannelGain msa_gain(Luminaire const& ap, MetasurfaceArray const& array,
                            PhotoDetector const& ue, std::span<OrientedBox const> blockers)
{
    CompensatedSum total;
    for (MetasurfacePatch const& p : array.patches) {
        total.add(msa_patch_gain(ap, p, ue, blockers).value);
    }
    return {total.value()};
}

enum class AssignmentObjective { MaxSum, MaxMin };

struct MirrorAssignment {
    /// owner[k] = UE index of the k-th element, arrays concatenated in order
    std::vector<std::size_t> owner;
    std::vector<double> ue_gains;
};

/**
 * @brief Split mirrors into clusters, one per UE
 *
 * MaxSum gives every element to the UE it serves best, which is optimal
 * because elements contribute independently. MaxMin runs greedy rounds in
 * which the currently worst-served UE takes its best remaining element.
 * Ties go to the lowest index.
 */
inline MirrorAssignment assign_mirrors_multi_ue(Luminaire const& ap,
                                                std::span<MirrorArray const> arrays,
                                                std::span<PhotoDetector const> ues,
                                                std::span<OrientedBox const> blockers,
                                                AssignmentObjective objective)
{
    if (ues.empty()) {
        throw ArgumentError("assign_mirrors_multi_ue: no receivers");
    }
    std::vector<MirrorElement const*> elems;
    for (auto const& a : arrays) {
        for (auto const& e : a.elements) {
            elems.push_back(&e);
        }
    }
    std::size_t const n_elem = elems.size();
    std::size_t const n_ue = ues.size();

    // gain[e * n_ue + u]: element e steered toward UE u
    std::vector<double> gain(n_elem * n_ue, 0.0);
    for (std::size_t e = 0; e < n_elem; ++e) {
        for (std::size_t u = 0; u < n_ue; ++u) {
            MirrorElement const& rest = *elems[e];
            detail::LegGeometry g;
            if (!detail::leg_geometry(ap, rest.center, ues[u], g)) {
                continue;
            }
            MirrorElement oriented =
                rest.oriented(optimal_mirror_normal(ap.position, rest.center, ues[u].position));
            gain[e * n_ue + u] = detail::mirror_gain_impl(ap, oriented, ues[u], blockers, g);
        }
    }

    MirrorAssignment out;
    out.owner.assign(n_elem, 0);
    if (objective == AssignmentObjective::MaxSum) {
        for (std::size_t e = 0; e < n_elem; ++e) {
            std::size_t best = 0;
            for (std::size_t u = 1; u < n_ue; ++u) {
                if (gain[e * n_ue + u] > gain[e * n_ue + best]) {
                    best = u;
                }
            }
            out.owner[e] = best;
        }
    } else {
        std::vector<bool> taken(n_elem, false);
        std::vector<double> running(n_ue, 0.0);
        for (std::size_t round = 0; round < n_elem; ++round) {
            std::size_t worst = 0;
            for (std::size_t u = 1; u < n_ue; ++u) {
                if (running[u] < running[worst]) {
                    worst = u;
                }
            }
            std::size_t pick = n_elem;
            for (std::size_t e = 0; e < n_elem; ++e) {
                if (!taken[e] && (pick == n_elem || gain[e * n_ue + worst] > gain[pick * n_ue + worst])) {
                    pick = e;
                }
            }
            taken[pick] = true;
            out.owner[pick] = worst;
            running[worst] += gain[pick * n_ue + worst];
        }
    }

    std::vector<CompensatedSum> sums(n_ue);
    for (std::size_t e = 0; e < n_elem; ++e) {
        sums[out.owner[e]].add(gain[e * n_ue + out.owner[e]]);
    }
    for (auto const& s : sums) {
        out.ue_gains.push_back(s.value());
    }
    return out;
}

} // namespace irsvlc
