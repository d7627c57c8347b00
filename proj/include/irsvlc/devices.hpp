// SPDX-License-Identifier: Apache-2.0
/**
 * @file devices.hpp
 * @brief Room, luminaire and photodetector descriptions
 */
#pragma once

#include <numbers>

#include "errors.hpp"
#include "geometry.hpp"

namespace irsvlc {

struct Room {
    double length = 5.0; //!< extent along x [m]
    double width = 5.0;  //!< extent along y [m]
    double height = 3.0; //!< extent along z [m]

    void validate() const
    {
        if (!(length > 0 && width > 0 && height > 0)) {
            throw ConfigError("room", "dimensions must be positive");
        }
    }

    bool contains(Vec3 const& p) const
    {
        return p.x >= 0 && p.x <= length && p.y >= 0 && p.y <= width && p.z >= 0
               && p.z <= height;
    }
};

/// Lambertian LED access point.
struct Luminaire {
    Vec3 position{2.5, 2.5, 3.0};
    UnitVec3 normal{0.0, 0.0, -1.0};
    double lambertian_order = 1.0;
    double optical_power = 1.0; //!< nominal [W], reporting only

    void validate() const
    {
        if (!(lambertian_order >= 1.0) || !std::isfinite(lambertian_order)) {
            throw ConfigError("ap.lambertian_order", "must be >= 1");
        }
        if (!is_finite(position)) {
            throw ConfigError("ap.position", "must be finite");
        }
    }
};

struct PhotoDetector {
    Vec3 position;
    UnitVec3 normal{0.0, 0.0, 1.0};
    double area = 1e-4;                          //!< [m^2]
    double fov = 85.0 * std::numbers::pi / 180; //!< half angle [rad]

    void validate() const
    {
        if (!(area > 0)) {
            throw ConfigError("receiver.area", "must be positive");
        }
        if (!(fov > 0 && fov <= std::numbers::pi / 2)) {
            throw ConfigError("receiver.fov_deg", "must be in (0, 90]");
        }
    }
};

/**
 * @brief Generic Lambertian link gain
 *
 * (m + 1) A / (2 pi d^2) cos^m(emit) cos(incident), with the caller
 * responsible for visibility and FOV checks.
 */
inline double lambertian_gain(double order, double area, double distance_sq, double cos_emit,
                              double cos_incident)
{
    return (order + 1.0) * area / (2.0 * std::numbers::pi * distance_sq)
           * std::pow(cos_emit, order) * cos_incident;
}

} // namespace irsvlc
