// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "irsvlc/channel.hpp"
#include "irsvlc/errors.hpp"

using namespace irsvlc;

namespace {
PhotoDetector up_facing(Vec3 p, double fov_deg = 85.0)
{
    return {p, {0, 0, 1}, 1e-4, deg_to_rad(fov_deg)};
}

std::vector<WallPatch> patches_on(std::vector<WallPatch> const& all, Wall w)
{
    std::vector<WallPatch> out;
    for (auto const& p : all) {
        if (p.wall == w) {
            out.push_back(p);
        }
    }
    return out;
}
} // namespace

TEST(LosGain, DirectlyBelowAccessPoint)
{
    Luminaire ap;
    double h = los_gain(ap, up_facing({2.5, 2.5, 1.0}), {}).value;
    EXPECT_NEAR(h, 2 * 1e-4 / (2 * std::numbers::pi * 4), 1e-18);
    EXPECT_NEAR(h, 7.9577e-6, 5e-11);
}

TEST(LosGain, OutsideFieldOfViewIsZero)
{
    Luminaire ap;
    PhotoDetector ue{{2.5, 2.5, 1.0}, unit_normal_from_polar(deg_to_rad(60), 0.0), 1e-4,
                     deg_to_rad(30)};
    EXPECT_EQ(los_gain(ap, ue, {}).value, 0.0);
}

TEST(LosGain, FieldOfViewEdge)
{
    Luminaire ap;
    // Incidence 40 degrees: inside a 45 degree FOV, outside a 35 degree one.
    PhotoDetector ue{{2.5, 2.5, 1.0}, unit_normal_from_polar(deg_to_rad(40), 0.0), 1e-4,
                     deg_to_rad(45)};
    EXPECT_GT(los_gain(ap, ue, {}).value, 0.0);
    ue.fov = deg_to_rad(35);
    EXPECT_EQ(los_gain(ap, ue, {}).value, 0.0);
}

TEST(LosGain, BlockerOnPathIsZero)
{
    Luminaire ap;
    std::vector<OrientedBox> b{OrientedBox({2.5, 2.5, 1.5}, {0.375, 0.1, 0.2}, 0.3)};
    EXPECT_EQ(los_gain(ap, up_facing({2.5, 2.5, 1.0}), b).value, 0.0);
}

TEST(LosGain, CoincidentPointsThrow)
{
    Luminaire ap;
    EXPECT_THROW(los_gain(ap, up_facing(ap.position), {}), ArgumentError);
}

TEST(Shadowed, Basics)
{
    EXPECT_FALSE(shadowed({0, 0, 0}, {1, 1, 1}, {}));
    std::vector<OrientedBox> b{OrientedBox({1, 1, 0.875}, {0.375, 0.1, 0.875}, 0.0)};
    EXPECT_TRUE(shadowed({1, 1, 0}, {1, 1, 3}, b));
}

TEST(Shadowed, EqualsOrOfPerBoxTests)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    std::uniform_real_distribution<double> yaw(0.0, std::numbers::pi);
    std::vector<OrientedBox> boxes;
    for (int i = 0; i < 100; ++i) {
        boxes.emplace_back(Vec3{u(rng), u(rng), 0.875}, Vec3{0.375, 0.1, 0.875}, yaw(rng));
    }
    for (int k = 0; k < 500; ++k) {
        Vec3 p{u(rng), u(rng), 0.6 * u(rng)};
        Vec3 q{u(rng), u(rng), 0.6 * u(rng)};
        bool any = false;
        for (auto const& b : boxes) {
            any = any || segment_intersects_box({p, q}, b);
        }
        ASSERT_EQ(shadowed(p, q, boxes), any);
    }
}

TEST(WallPatches, ExactTiling)
{
    auto patches = wall_patches(Room{5, 5, 3}, 1.0);
    for (Wall w : all_walls) {
        auto on = patches_on(patches, w);
        ASSERT_EQ(on.size(), 15u);
        for (auto const& p : on) {
            EXPECT_NEAR(p.area, 1.0, 1e-12);
        }
    }
}

TEST(WallPatches, AreaConserved)
{
    auto patches = wall_patches(Room{5, 5, 3}, 0.3);
    for (Wall w : all_walls) {
        double area = 0.0;
        for (auto const& p : patches_on(patches, w)) {
            area += p.area;
        }
        EXPECT_NEAR(area, 15.0, 1e-9);
    }
}

TEST(WallPatches, OversizedTargetGivesOnePatchPerWall)
{
    auto patches = wall_patches(Room{5, 5, 3}, 10.0);
    EXPECT_EQ(patches.size(), 4u);
}

TEST(WallPatches, NormalsPointInward)
{
    Room room;
    Vec3 center{room.length / 2, room.width / 2, room.height / 2};
    for (auto const& p : wall_patches(room, 0.5)) {
        EXPECT_GT(dot(p.normal.vec(), center - p.center), 0.0);
    }
}

TEST(NlosGain, ZeroReflectivity)
{
    auto patches = wall_patches(Room{}, 0.25, 0.0);
    EXPECT_EQ(nlos_gain(Luminaire{}, up_facing({1, 2, 1}), patches, {}).value, 0.0);
}

TEST(NlosGain, FourWallSymmetry)
{
    auto patches = wall_patches(Room{}, 0.25);
    PhotoDetector ue = up_facing({2.5, 2.5, 1.0});
    double ref = nlos_gain(Luminaire{}, ue, patches_on(patches, Wall::West), {}).value;
    ASSERT_GT(ref, 0.0);
    for (Wall w : all_walls) {
        double g = nlos_gain(Luminaire{}, ue, patches_on(patches, w), {}).value;
        EXPECT_NEAR(g, ref, 1e-9 * ref);
    }
}

TEST(NlosGain, GridRefinementConverges)
{
    Luminaire ap;
    PhotoDetector ue{{1.3, 3.1, 0.9}, unit_normal_from_polar(deg_to_rad(35), 2.0), 1e-4,
                     deg_to_rad(85)};
    double coarse = nlos_gain(ap, ue, wall_patches(Room{}, 0.25), {}).value;
    double fine = nlos_gain(ap, ue, wall_patches(Room{}, 0.125), {}).value;
    EXPECT_LT(std::abs(coarse - fine), 0.02 * fine);
}

TEST(NlosGain, BlockersOnlyRemoveEnergy)
{
    Luminaire ap;
    PhotoDetector ue = up_facing({1.0, 1.5, 1.0});
    auto patches = wall_patches(Room{}, 0.25);
    std::vector<OrientedBox> b{OrientedBox({0.5, 1.5, 0.875}, {0.375, 0.1, 0.875}, 1.2)};
    EXPECT_LE(nlos_gain(ap, ue, patches, b).value, nlos_gain(ap, ue, patches, {}).value);
}

TEST(NlosGain, SecondOrderIsSmallerThanFirst)
{
    Luminaire ap;
    PhotoDetector ue = up_facing({1.5, 2.0, 1.0});
    auto patches = wall_patches(Room{}, 0.5);
    double first = nlos_gain(ap, ue, patches, {}).value;
    double second = nlos_gain_second_order(ap, ue, patches, {}).value;
    EXPECT_GT(second, 0.0);
    EXPECT_LT(second, first);
}
