// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "irsvlc/errors.hpp"
#include "irsvlc/scene.hpp"

using namespace irsvlc;

TEST(BuildScene, PaperArraysFillWalls)
{
    Scene scene = default_scene(50);
    ASSERT_EQ(scene.mirror_arrays.size(), 4u);
    for (auto const& a : scene.mirror_arrays) {
        ASSERT_EQ(a.elements.size(), 2500u);
        WallFrame f = wall_frame(scene.room(), a.wall);
        double s_lo = 1e9, s_hi = -1e9, z_lo = 1e9, z_hi = -1e9;
        for (auto const& e : a.elements) {
            double s = dot(e.center - f.origin, f.horizontal.vec());
            s_lo = std::min(s_lo, s);
            s_hi = std::max(s_hi, s);
            z_lo = std::min(z_lo, e.center.z);
            z_hi = std::max(z_hi, e.center.z);
            EXPECT_NEAR(dot(e.center - f.origin, f.inward.vec()), 0.0, 1e-12);
        }
        EXPECT_NEAR(s_hi - s_lo + 0.1, 5.0, 1e-9);
        EXPECT_NEAR(z_hi - z_lo + 0.06, 3.0, 1e-9);
    }
}

TEST(BuildScene, RowMajorFromBottom)
{
    Scene scene = default_scene(3);
    auto const& e = scene.mirror_arrays[0].elements;
    EXPECT_LT(e[0].center.z, e[3].center.z);
    EXPECT_EQ(e[0].center.z, e[1].center.z);
    EXPECT_LT(e[0].center.y, e[1].center.y);
}

TEST(BuildScene, OversizedArrayRejected)
{
    try {
        default_scene(51);
        FAIL() << "expected ConfigError";
    } catch (ConfigError const& e) {
        EXPECT_EQ(e.field(), "irs.n_per_side");
    }
}

TEST(BuildScene, NoIrs)
{
    SceneParameters p;
    p.irs_type = IrsType::None;
    p.n_per_side = 500; // ignored without an IRS
    Scene scene = build_scene(p);
    EXPECT_TRUE(scene.mirror_arrays.empty());
    EXPECT_TRUE(scene.metasurface_arrays.empty());
}

TEST(BuildScene, ValidationFields)
{
    auto field_of = [](SceneParameters const& p) {
        try {
            validate(p);
        } catch (ConfigError const& e) {
            return e.field();
        }
        return std::string();
    };
    SceneParameters p;
    p.wall_reflectivity = 1.5;
    EXPECT_EQ(field_of(p), "surfaces.wall_reflectivity");
    p = {};
    p.ue_height = 3.0;
    EXPECT_EQ(field_of(p), "receiver.height");
    p = {};
    p.orientation.theta_std_deg = 0.0;
    EXPECT_EQ(field_of(p), "orientation.theta_std_deg");
    p = {};
    p.blockers.density = -1;
    EXPECT_EQ(field_of(p), "blockers.density");
    EXPECT_EQ(field_of(SceneParameters{}), "");
}

TEST(SampleUe, StaysInRoomAtHeight)
{
    Scene scene = default_scene(1);
    auto rng = trial_stream(5, 0);
    for (int i = 0; i < 2000; ++i) {
        PhotoDetector ue = sample_ue(rng, scene);
        EXPECT_TRUE(scene.room().contains(ue.position));
        EXPECT_EQ(ue.position.z, 1.0);
        EXPECT_GE(ue.normal.z(), -1e-15);
    }
}

TEST(SampleUe, DegenerateOrientationFacesUp)
{
    SceneParameters p;
    p.orientation.theta_mean_deg = 0.0;
    p.orientation.theta_std_deg = 1e-9;
    p.n_per_side = 1;
    Scene scene = build_scene(p);
    auto rng = trial_stream(9, 3);
    for (int i = 0; i < 200; ++i) {
        EXPECT_NEAR(sample_ue(rng, scene).normal.z(), 1.0, 1e-15);
    }
}

TEST(SampleBlockers, ZeroDensityIsEmpty)
{
    Scene scene = default_scene(1);
    auto rng = trial_stream(1, 1);
    EXPECT_TRUE(sample_blockers(rng, scene).empty());
}

TEST(SampleBlockers, MeanCountMatchesDensity)
{
    SceneParameters p;
    p.blockers.density = 1.0;
    p.n_per_side = 1;
    Scene scene = build_scene(p);
    double total = 0.0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        auto rng = trial_stream(2024, t);
        total += static_cast<double>(sample_blockers(rng, scene).size());
    }
    EXPECT_NEAR(total / 10000.0, 25.0, 3 * 0.05);
}

TEST(SampleBlockers, BoxesStandOnFloor)
{
    SceneParameters p;
    p.blockers.density = 2.0;
    p.n_per_side = 1;
    Scene scene = build_scene(p);
    auto rng = trial_stream(3, 0);
    for (auto const& b : sample_blockers(rng, scene)) {
        EXPECT_DOUBLE_EQ(b.center().z, 0.875);
        EXPECT_DOUBLE_EQ(b.half_extents().x, 0.375);
        EXPECT_DOUBLE_EQ(b.half_extents().y, 0.1);
        EXPECT_GE(b.center().x, 0.0);
        EXPECT_LE(b.center().x, 5.0);
    }
}

TEST(TrialStream, Reproducible)
{
    SceneParameters p;
    p.blockers.density = 1.0;
    p.n_per_side = 1;
    Scene scene = build_scene(p);
    auto a = trial_stream(77, 12);
    auto b = trial_stream(77, 12);
    PhotoDetector ua = sample_ue(a, scene), ub = sample_ue(b, scene);
    EXPECT_EQ(ua.position, ub.position);
    EXPECT_EQ(ua.normal, ub.normal);
    auto ba = sample_blockers(a, scene), bb = sample_blockers(b, scene);
    ASSERT_EQ(ba.size(), bb.size());
    for (std::size_t i = 0; i < ba.size(); ++i) {
        EXPECT_EQ(ba[i].center(), bb[i].center());
        EXPECT_EQ(ba[i].yaw(), bb[i].yaw());
    }
}

TEST(TrialStream, DistinctTrialsDiffer)
{
    EXPECT_NE(trial_stream(1, 0)(), trial_stream(1, 1)());
    EXPECT_NE(trial_stream(1, 0)(), trial_stream(2, 0)());
    EXPECT_NE(trial_stream(0, 1)(), trial_stream(1, 0)());
}
