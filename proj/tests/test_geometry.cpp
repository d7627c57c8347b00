// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "irsvlc/errors.hpp"
#include "irsvlc/geometry.hpp"
#include "irsvlc/numeric.hpp"
#include "irsvlc/oracles.hpp"

using namespace irsvlc;

namespace {
void expect_near(Vec3 const& a, Vec3 const& b, double tol = 1e-12)
{
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
    EXPECT_NEAR(a.z, b.z, tol);
}
} // namespace

TEST(UnitNormal, PolarAngleZeroIsUp)
{
    for (double omega : {0.0, 1.0, 4.0}) {
        expect_near(unit_normal_from_polar(0.0, omega).vec(), {0, 0, 1});
    }
}

TEST(UnitNormal, KnownDirections)
{
    expect_near(unit_normal_from_polar(std::numbers::pi / 2, 0.0).vec(), {1, 0, 0});
    double h = std::sqrt(2.0) / 2;
    expect_near(unit_normal_from_polar(std::numbers::pi / 4, std::numbers::pi / 2).vec(), {0, h, h});
}

TEST(UnitNormal, RejectsOutOfRange)
{
    EXPECT_THROW(unit_normal_from_polar(-0.1, 0.0), ArgumentError);
    EXPECT_THROW(unit_normal_from_polar(std::numbers::pi / 2 + 0.01, 0.0), ArgumentError);
    EXPECT_THROW(unit_normal_from_polar(0.5, 2 * std::numbers::pi), ArgumentError);
    EXPECT_THROW(unit_normal_from_polar(std::nan(""), 0.0), ArgumentError);
}

TEST(UnitVec, RejectsNonUnit)
{
    EXPECT_THROW(UnitVec3(1, 1, 0), ArgumentError);
    EXPECT_THROW(UnitVec3::normalize({0, 0, 0}), ArgumentError);
    EXPECT_NO_THROW(UnitVec3::normalize({3, 4, 0}));
}

TEST(Reflect, NormalIncidenceRetroreflects)
{
    expect_near(reflect({0, 0, -1}, {0, 0, 1}).vec(), {0, 0, 1});
}

TEST(Reflect, FortyFiveDegrees)
{
    double h = std::sqrt(2.0) / 2;
    expect_near(reflect({h, 0, -h}, {0, 0, 1}).vec(), {h, 0, h});
}

TEST(Reflect, BackFaceThrows)
{
    EXPECT_THROW(reflect({0, 0, 1}, {0, 0, 1}), ArgumentError);
}

TEST(Reflect, AngleInEqualsAngleOut)
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    int checked = 0;
    while (checked < 10000) {
        Vec3 a{g(rng), g(rng), g(rng)};
        Vec3 b{g(rng), g(rng), g(rng)};
        if (norm(a) < 1e-3 || norm(b) < 1e-3) {
            continue;
        }
        UnitVec3 d = UnitVec3::normalize(a);
        UnitVec3 n = UnitVec3::normalize(b);
        if (dot(d.vec(), n.vec()) > -1e-3) {
            n = -n;
        }
        if (dot(d.vec(), n.vec()) > -1e-3) {
            continue;
        }
        UnitVec3 r = reflect(d, n);
        double in = std::atan2(norm(cross(d.vec(), n.vec())), -dot(d.vec(), n.vec()));
        double out = std::atan2(norm(cross(r.vec(), n.vec())), dot(r.vec(), n.vec()));
        ASSERT_LT(std::abs(in - out), 1e-12);
        ++checked;
    }
}

TEST(CosBetween, Examples)
{
    UnitVec3 up{0, 0, 1};
    EXPECT_DOUBLE_EQ(cos_between(up, up), 1.0);
    EXPECT_NEAR(cos_between(up, {1, 0, 0}), 0.0, 1e-15);
    EXPECT_NEAR(cos_between(up, UnitVec3::normalize({1, 0, 1})), std::sqrt(2.0) / 2, 1e-15);
}

TEST(Segment, RejectsZeroLength)
{
    EXPECT_THROW(Segment({1, 2, 3}, {1, 2, 3}), ArgumentError);
}

TEST(OrientedBox, RejectsBadParameters)
{
    EXPECT_THROW(OrientedBox({0, 0, 0}, {0, 1, 1}, 0.0), ArgumentError);
    EXPECT_THROW(OrientedBox({0, 0, 0}, {1, 1, 1}, std::numbers::pi), ArgumentError);
    EXPECT_THROW(OrientedBox({0, 0, 0}, {1, 1, 1}, -0.1), ArgumentError);
}

TEST(SegmentBox, Disjoint)
{
    OrientedBox box({0, 0, 0.875}, {0.375, 0.1, 0.875}, 0.0);
    EXPECT_FALSE(segment_intersects_box({{10, 10, 0}, {10, 10, 3}}, box));
}

TEST(SegmentBox, ThroughCenter)
{
    OrientedBox box({0, 0, 0.875}, {0.375, 0.1, 0.875}, 0.0);
    EXPECT_TRUE(segment_intersects_box({{0, 0, 0}, {0, 0, 3}}, box));
}

TEST(SegmentBox, YawedBoxGrazingSegment)
{
    // Yaw 45 degrees puts the local +x face on the line x + y = 0.5 * sqrt(2).
    OrientedBox box({0, 0, 0.5}, {0.5, 0.1, 0.5}, std::numbers::pi / 4);
    Segment outside({0.72, 0.0, 0.5}, {0.0, 0.72, 0.5});
    Segment inside({0.70, 0.0, 0.5}, {0.0, 0.70, 0.5});
    EXPECT_FALSE(segment_intersects_box(outside, box));
    EXPECT_TRUE(segment_intersects_box(inside, box));
    EXPECT_EQ(segment_intersects_box(outside, box),
              oracles::point_sample_occlusion(outside.a, outside.b, box, 10000));
    EXPECT_EQ(segment_intersects_box(inside, box),
              oracles::point_sample_occlusion(inside.a, inside.b, box, 10000));
}

TEST(SegmentBox, EndpointTouchingFaceIsNotBlocked)
{
    OrientedBox box({0, 0, 0.5}, {0.5, 0.5, 0.5}, 0.0);
    EXPECT_FALSE(segment_intersects_box({{0.5, 0, 0.5}, {2, 0, 0.5}}, box));
    EXPECT_FALSE(segment_intersects_box({{-1, 0.5, 0.5}, {1, 0.5, 0.5}}, box));
}

TEST(CompensatedSum, RecoversCancellation)
{
    std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    EXPECT_DOUBLE_EQ(compensated_sum(v), 2.0);
    EXPECT_DOUBLE_EQ(sorted_compensated_sum({3.0, 1e-20, 2.0}), 5.0);
}
