// SPDX-License-Identifier: Apache-2.0
/**
 * @file scene.hpp
 * @brief Experiment description and the per-trial UE pose / blocker samplers
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "channel.hpp"
#include "devices.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "irs.hpp"

namespace irsvlc {

/**
 * @brief Independent random stream for one Monte Carlo trial
 *
 * Seeded from (master seed, trial index) only, so a trial draws the same
 * numbers no matter which worker runs it or in which order.
 */
inline std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                      0x1c5u};
    return std::mt19937_64(seq);
}

/// Device tilt: truncated Gaussian polar angle, uniform azimuth.
struct OrientationModel {
    double theta_mean_deg = 41.0;
    double theta_std_deg = 9.0;
    double theta_min_deg = 0.0;
    double theta_max_deg = 90.0;

    void validate() const
    {
        if (!(theta_std_deg > 0.0) || !std::isfinite(theta_std_deg)) {
            throw ConfigError("orientation.theta_std_deg", "must be positive");
        }
        if (!(theta_mean_deg >= theta_min_deg && theta_mean_deg <= theta_max_deg)) {
            throw ConfigError("orientation.theta_mean_deg", "must lie in [0, 90]");
        }
    }
};

/// Poisson point process of human-sized box blockers.
struct BlockerModel {
    static constexpr Vec3 dimensions{0.75, 0.2, 1.75};
    double density = 0.0; //!< blockers per m^2 of floor

    void validate() const
    {
        if (!(density >= 0.0) || !std::isfinite(density)) {
            throw ConfigError("blockers.density", "must be >= 0");
        }
    }
};

enum class IrsType { None, Mirror, Metasurface };

inline char const* to_string(IrsType t)
{
    switch (t) {
    case IrsType::None: return "none";
    case IrsType::Mirror: return "mirror";
    case IrsType::Metasurface: return "metasurface";
    }
    return "?";
}

/// Physical constants and placements that define a scene.
struct SceneParameters {
    Room room;
    Luminaire ap;
    double receiver_area = 1e-4;
    double receiver_fov_deg = 85.0;
    double ue_height = 1.0;
    OrientationModel orientation;
    BlockerModel blockers;
    double wall_reflectivity = 0.7;
    double mirror_reflectivity = 0.95;
    double msa_efficiency = 0.8;
    double element_width = 0.1;
    double element_height = 0.06;
    std::size_t n_per_side = 50;
    IrsType irs_type = IrsType::Mirror;
    double nlos_patch_size = 0.25;
    int reflection_order = 1;
};

struct Scene {
    SceneParameters params;
    std::vector<Luminaire> aps;
    std::vector<MirrorArray> mirror_arrays;
    std::vector<MetasurfaceArray> metasurface_arrays;

    Room const& room() const { return params.room; }
};

namespace detail {
template<class F>
void for_each_element_slot(Room const& room, Wall wall, std::size_t n, double w, double h, F&& f)
{
    WallFrame frame = wall_frame(room, wall);
    double half = 0.5 * static_cast<double>(n - 1);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double s = 0.5 * frame.span + (static_cast<double>(c) - half) * w;
            double z = 0.5 * room.height + (static_cast<double>(r) - half) * h;
            f(frame, frame.point(s, z));
        }
    }
}
} // namespace detail

inline void validate(SceneParameters const& p)
{
    p.room.validate();
    p.ap.validate();
    p.orientation.validate();
    p.blockers.validate();
    PhotoDetector{{}, {0, 0, 1}, p.receiver_area, deg_to_rad(p.receiver_fov_deg)}.validate();
    if (!(p.ue_height > 0.0 && p.ue_height < p.room.height)) {
        throw ConfigError("receiver.height", "must lie strictly between floor and ceiling");
    }
    auto unit_interval = [](double v, char const* field) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ConfigError(field, "must lie in [0, 1]");
        }
    };
    unit_interval(p.wall_reflectivity, "surfaces.wall_reflectivity");
    unit_interval(p.mirror_reflectivity, "irs.mirror_reflectivity");
    unit_interval(p.msa_efficiency, "irs.msa_efficiency");
    if (!(p.element_width > 0.0 && p.element_height > 0.0)) {
        throw ConfigError("irs.element_width", "element size must be positive");
    }
    if (p.n_per_side < 1) {
        throw ConfigError("irs.n_per_side", "must be >= 1");
    }
    if (!(p.nlos_patch_size > 0.0)) {
        throw ConfigError("surfaces.nlos_patch_size", "must be positive");
    }
    if (p.reflection_order < 0 || p.reflection_order > 2) {
        throw ConfigError("surfaces.reflection_order", "must be 0, 1 or 2");
    }
    if (p.irs_type != IrsType::None) {
        double n = static_cast<double>(p.n_per_side);
        double shortest = std::min(p.room.length, p.room.width);
        if (n * p.element_width > shortest + 1e-9) {
            throw ConfigError("irs.n_per_side",
                              "array width " + std::to_string(n * p.element_width)
                                  + " m exceeds wall length");
        }
        if (n * p.element_height > p.room.height + 1e-9) {
            throw ConfigError("irs.n_per_side",
                              "array height " + std::to_string(n * p.element_height)
                                  + " m exceeds wall height");
        }
    }
}

/// Build a scene with one N x N IRS centered on each wall.
inline Scene build_scene(SceneParameters const& p)
{
    validate(p);
    Scene scene;
    scene.params = p;
    scene.aps.push_back(p.ap);
    std::size_t const n = p.n_per_side;
    for (Wall wall : all_walls) {
        if (p.irs_type == IrsType::Mirror) {
            MirrorArray array{wall, n, n, {}};
            array.elements.reserve(n * n);
            detail::for_each_element_slot(
                p.room, wall, n, p.element_width, p.element_height,
                [&](WallFrame const& f, Vec3 const& c) {
                    array.elements.push_back({c, f.inward, f.inward, f.horizontal,
                                              UnitVec3{0, 0, 1}, p.element_width,
                                              p.element_height, p.mirror_reflectivity});
                });
            scene.mirror_arrays.push_back(std::move(array));
        } else if (p.irs_type == IrsType::Metasurface) {
            MetasurfaceArray array{wall, n, n, {}};
            array.patches.reserve(n * n);
            detail::for_each_element_slot(
                p.room, wall, n, p.element_width, p.element_height,
                [&](WallFrame const& f, Vec3 const& c) {
                    array.patches.push_back({c, f.inward, p.element_width * p.element_height,
                                             f.inward, p.msa_efficiency});
                });
            scene.metasurface_arrays.push_back(std::move(array));
        }
    }
    return scene;
}

/// Paper-replica room with N x N mirror arrays and default constants.
inline Scene default_scene(std::size_t n_per_side, IrsType irs = IrsType::Mirror)
{
    SceneParameters p;
    p.n_per_side = n_per_side;
    p.irs_type = irs;
    return build_scene(p);
}

/// Draw a receiver position (uniform over the floor at ue_height) and tilt.
template<class Engine>
PhotoDetector sample_ue(Engine& rng, Scene const& scene)
{
    auto const& p = scene.params;
    std::uniform_real_distribution<double> ux(0.0, p.room.length);
    std::uniform_real_distribution<double> uy(0.0, p.room.width);
    std::uniform_real_distribution<double> uaz(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> gauss(p.orientation.theta_mean_deg,
                                           p.orientation.theta_std_deg);
    double x = ux(rng);
    double y = uy(rng);
    double theta_deg = gauss(rng);
    while (theta_deg < p.orientation.theta_min_deg || theta_deg > p.orientation.theta_max_deg) {
        theta_deg = gauss(rng);
    }
    double omega = uaz(rng);
    if (omega >= 2.0 * std::numbers::pi) {
        omega = 0.0;
    }
    return {{x, y, p.ue_height},
            unit_normal_from_polar(std::min(deg_to_rad(theta_deg), std::numbers::pi / 2), omega),
            p.receiver_area,
            deg_to_rad(p.receiver_fov_deg)};
}

/// Poisson-count blockers, uniform floor positions, uniform yaw.
template<class Engine>
std::vector<OrientedBox> sample_blockers(Engine& rng, Scene const& scene)
{
    auto const& p = scene.params;
    std::vector<OrientedBox> out;
    double mean = p.blockers.density * p.room.length * p.room.width;
    if (!(mean > 0.0)) {
        return out;
    }
    std::poisson_distribution<int> count_dist(mean);
    int count = count_dist(rng);
    std::uniform_real_distribution<double> ux(0.0, p.room.length);
    std::uniform_real_distribution<double> uy(0.0, p.room.width);
    std::uniform_real_distribution<double> uyaw(0.0, std::numbers::pi);
    Vec3 const half = BlockerModel::dimensions * 0.5;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double x = ux(rng);
        double y = uy(rng);
        double yaw = uyaw(rng);
        if (yaw >= std::numbers::pi) {
            yaw = 0.0;
        }
        out.emplace_back(Vec3{x, y, half.z}, half, yaw);
    }
    return out;
}

} // namespace irsvlc
