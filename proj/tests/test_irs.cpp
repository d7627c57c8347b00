// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "irsvlc/errors.hpp"
#include "irsvlc/irs.hpp"
#include "irsvlc/scene.hpp"

using namespace irsvlc;

namespace {
double const r2 = std::numbers::sqrt2;

// Element at the origin facing +x; AP and UE 2 m away at +-45 degrees,
// both pointing straight at the element.
struct SpecularSetup {
    Luminaire ap{{r2, r2, 0}, UnitVec3::normalize({-1, -1, 0}), 1.0, 1.0};
    PhotoDetector ue{{r2, -r2, 0}, UnitVec3::normalize({-1, 1, 0}), 1e-4,
                     deg_to_rad(85)};
    MirrorElement elem{{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, 0.1, 0.06, 0.95};
};

Scene scene_with(std::size_t n, IrsType type = IrsType::Mirror)
{
    SceneParameters p;
    p.n_per_side = n;
    p.irs_type = type;
    return build_scene(p);
}

PhotoDetector up_facing(Vec3 p) { return {p, {0, 0, 1}, 1e-4, deg_to_rad(85)}; }
} // namespace

TEST(OptimalMirrorNormal, SymmetricGivesWallNormal)
{
    UnitVec3 n = optimal_mirror_normal({1, 1, 0.5}, {0, 0, 0.5}, {1, -1, 0.5});
    EXPECT_NEAR(n.x(), 1.0, 1e-15);
    EXPECT_NEAR(n.y(), 0.0, 1e-15);
    EXPECT_NEAR(n.z(), 0.0, 1e-15);
}

TEST(OptimalMirrorNormal, Retroreflection)
{
    Vec3 src{1, 2, 3};
    UnitVec3 n = optimal_mirror_normal(src, {0, 0, 0}, src);
    Vec3 u = src / norm(src);
    EXPECT_NEAR(dot(n.vec(), u), 1.0, 1e-15);
}

TEST(OptimalMirrorNormal, Errors)
{
    EXPECT_THROW(optimal_mirror_normal({0, 0, 0}, {0, 0, 0}, {1, 0, 0}), ArgumentError);
    EXPECT_THROW(optimal_mirror_normal({1, 0, 0}, {0, 0, 0}, {-2, 0, 0}), DegenerateGeometryError);
}

TEST(OptimalMirrorNormal, ReflectsSourceTowardDestination)
{
    Vec3 src{2.5, 2.5, 3}, c{0, 1.2, 1.7}, dst{3.1, 0.7, 1.0};
    UnitVec3 n = optimal_mirror_normal(src, c, dst);
    UnitVec3 out = reflect(UnitVec3::normalize(c - src), n);
    Vec3 want = (dst - c) / norm(dst - c);
    EXPECT_NEAR(norm(out.vec() - want), 0.0, 1e-14);
}

TEST(MirrorElementGain, SpecularExample)
{
    SpecularSetup s;
    double h = mirror_element_gain(s.ap, s.elem, s.ue, {}).value;
    EXPECT_NEAR(h, 0.95 * 2 * 1e-4 / (2 * std::numbers::pi * 16), 1e-18);
    EXPECT_NEAR(h, 1.8899e-6, 1e-10);
}

TEST(MirrorElementGain, BackFaceIsZero)
{
    SpecularSetup s;
    EXPECT_EQ(mirror_element_gain(s.ap, s.elem.oriented({-1, 0, 0}), s.ue, {}).value, 0.0);
}

TEST(MirrorElementGain, BlockedReflectedLegIsZero)
{
    SpecularSetup s;
    std::vector<OrientedBox> b{OrientedBox({r2 / 2, -r2 / 2, 0}, {0.1, 0.1, 0.1}, 0.0)};
    EXPECT_EQ(mirror_element_gain(s.ap, s.elem, s.ue, b).value, 0.0);
}

TEST(MirrorElementGain, MissedApertureIsZero)
{
    SpecularSetup s;
    // Tilting the mirror by 10 degrees swings the reflected ray far off the UE.
    UnitVec3 tilted = UnitVec3::normalize({std::cos(0.17), std::sin(0.17), 0});
    EXPECT_EQ(mirror_element_gain(s.ap, s.elem.oriented(tilted), s.ue, {}).value, 0.0);
}

TEST(MaGain, SingleElementArray)
{
    Scene scene = scene_with(1);
    ASSERT_EQ(scene.mirror_arrays.size(), 4u);
    Luminaire const& ap = scene.aps.front();
    PhotoDetector ue = up_facing({1.1, 3.4, 1.0});
    for (auto const& a : scene.mirror_arrays) {
        ASSERT_EQ(a.elements.size(), 1u);
        MirrorElement const& rest = a.elements.front();
        MirrorElement e = rest.oriented(optimal_mirror_normal(ap.position, rest.center, ue.position));
        EXPECT_EQ(ma_gain(ap, a, ue, {}).value, mirror_element_gain(ap, e, ue, {}).value);
    }
}

TEST(MaGain, SingleMirrorsAtWallCenters)
{
    Scene scene = scene_with(1);
    EXPECT_NEAR(scene.mirror_arrays[0].elements[0].center.x, 0.0, 1e-15);
    EXPECT_NEAR(scene.mirror_arrays[0].elements[0].center.y, 2.5, 1e-15);
    EXPECT_NEAR(scene.mirror_arrays[0].elements[0].center.z, 1.5, 1e-15);
}

TEST(MaGain, OppositeArraysSymmetric)
{
    Scene scene = scene_with(10);
    Luminaire const& ap = scene.aps.front();
    PhotoDetector ue = up_facing({2.5, 2.5, 1.0});
    double west = ma_gain(ap, scene.mirror_arrays[0], ue, {}).value;
    ASSERT_GT(west, 0.0);
    for (auto const& a : scene.mirror_arrays) {
        EXPECT_NEAR(ma_gain(ap, a, ue, {}).value, west, 1e-9 * west);
    }
}

TEST(MaGain, TwoByTwoEqualsHandSum)
{
    Scene scene = scene_with(2);
    Luminaire const& ap = scene.aps.front();
    PhotoDetector ue = up_facing({1.7, 2.2, 1.0});
    for (auto const& a : scene.mirror_arrays) {
        double sum = 0.0;
        for (auto const& rest : a.elements) {
            sum += mirror_element_gain(
                       ap, rest.oriented(optimal_mirror_normal(ap.position, rest.center, ue.position)),
                       ue, {})
                       .value;
        }
        EXPECT_NEAR(ma_gain(ap, a, ue, {}).value, sum, 1e-12 * std::max(sum, 1e-300));
    }
}

TEST(MaGain, ChannelVectorSumsToArrayGain)
{
    Scene scene = scene_with(6);
    Luminaire const& ap = scene.aps.front();
    PhotoDetector ue{{3.2, 1.4, 1.0}, unit_normal_from_polar(deg_to_rad(40), 3.0), 1e-4,
                     deg_to_rad(85)};
    for (auto const& a : scene.mirror_arrays) {
        IrsChannelVector v = mirror_channel_vector(ap, a, ue, {});
        ASSERT_EQ(v.cascaded.size(), 36u);
        EXPECT_NEAR(compensated_sum(v.cascaded), ma_gain(ap, a, ue, {}).value, 1e-20);
        for (std::size_t i = 0; i < v.cascaded.size(); ++i) {
            EXPECT_GE(v.cascaded[i], 0.0);
            EXPECT_GE(v.ap_to_element[i], 0.0);
        }
    }
}

TEST(MsaGain, PatchExample)
{
    SpecularSetup s;
    MetasurfacePatch patch{{0, 0, 0}, {1, 0, 0}, 0.006, {1, 0, 0}, 0.8};
    double h = msa_patch_gain(s.ap, patch, s.ue, {}).value;
    EXPECT_NEAR(h, 0.8 * 2 * 1e-4 / (2 * std::numbers::pi * 16), 1e-18);
    EXPECT_NEAR(h, 1.5915e-6, 5e-11);
}

TEST(MsaGain, ZeroEfficiency)
{
    SpecularSetup s;
    MetasurfacePatch patch{{0, 0, 0}, {1, 0, 0}, 0.006, {1, 0, 0}, 0.0};
    EXPECT_EQ(msa_patch_gain(s.ap, patch, s.ue, {}).value, 0.0);
}

TEST(MsaGain, WeakerThanMirrorsOnSameGeometry)
{
    Scene mirrors = scene_with(8);
    Scene meta = scene_with(8, IrsType::Metasurface);
    Luminaire const& ap = mirrors.aps.front();
    PhotoDetector ue = up_facing({1.2, 3.5, 1.0});
    for (std::size_t w = 0; w < 4; ++w) {
        double ma = ma_gain(ap, mirrors.mirror_arrays[w], ue, {}).value;
        double msa = msa_gain(ap, meta.metasurface_arrays[w], ue, {}).value;
        if (ma > 0.0) {
            EXPECT_LT(msa, ma);
        }
    }
}

TEST(MsaGain, SteersTowardReceiver)
{
    Scene meta = scene_with(2, IrsType::Metasurface);
    PhotoDetector ue = up_facing({1.2, 3.5, 1.0});
    MetasurfaceArray a = meta.metasurface_arrays[0];
    msa_gain(meta.aps.front(), a, ue, {});
    for (auto const& p : a.patches) {
        Vec3 want = (ue.position - p.center) / distance(ue.position, p.center);
        EXPECT_NEAR(norm(p.steering.vec() - want), 0.0, 1e-14);
    }
}

TEST(Assignment, SingleUeTakesEverything)
{
    Scene scene = scene_with(4);
    std::vector<PhotoDetector> ues{up_facing({1.5, 2.0, 1.0})};
    auto r = assign_mirrors_multi_ue(scene.aps.front(), scene.mirror_arrays, ues, {},
                                     AssignmentObjective::MaxSum);
    double total = 0.0;
    for (auto const& a : scene.mirror_arrays) {
        total += ma_gain(scene.aps.front(), a, ues[0], {}).value;
    }
    for (std::size_t o : r.owner) {
        EXPECT_EQ(o, 0u);
    }
    ASSERT_EQ(r.ue_gains.size(), 1u);
    EXPECT_NEAR(r.ue_gains[0], total, 1e-12 * total);
}

TEST(Assignment, MaxMinSymmetricPair)
{
    Scene scene = scene_with(4);
    std::vector<PhotoDetector> ues{up_facing({1.5, 2.5, 1.0}), up_facing({3.5, 2.5, 1.0})};
    auto r = assign_mirrors_multi_ue(scene.aps.front(), scene.mirror_arrays, ues, {},
                                     AssignmentObjective::MaxMin);
    ASSERT_GT(r.ue_gains[0], 0.0);
    EXPECT_NEAR(r.ue_gains[0], r.ue_gains[1], 1e-9 * r.ue_gains[0]);
}

TEST(Assignment, MaxSumMatchesExhaustiveSearch)
{
    Scene full = scene_with(2);
    MirrorArray west = full.mirror_arrays[0]; // 4 elements
    std::vector<MirrorArray> arrays{west};
    Luminaire const& ap = full.aps.front();
    std::vector<PhotoDetector> ues{up_facing({1.0, 1.8, 1.0}), up_facing({2.2, 3.1, 1.0})};

    double gain[4][2];
    for (std::size_t e = 0; e < 4; ++e) {
        for (std::size_t u = 0; u < 2; ++u) {
            MirrorElement const& rest = west.elements[e];
            gain[e][u] = mirror_element_gain(
                             ap, rest.oriented(optimal_mirror_normal(ap.position, rest.center, ues[u].position)),
                             ues[u], {})
                             .value;
        }
    }
    double best = 0.0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        double total = 0.0;
        for (std::size_t e = 0; e < 4; ++e) {
            total += gain[e][(mask >> e) & 1u];
        }
        best = std::max(best, total);
    }
    auto r = assign_mirrors_multi_ue(ap, arrays, ues, {}, AssignmentObjective::MaxSum);
    ASSERT_GT(best, 0.0);
    EXPECT_NEAR(r.ue_gains[0] + r.ue_gains[1], best, 1e-12 * best);
}

TEST(Assignment, NoReceiversThrows)
{
    Scene scene = scene_with(1);
    EXPECT_THROW(assign_mirrors_multi_ue(scene.aps.front(), scene.mirror_arrays, {}, {},
                                         AssignmentObjective::MaxSum),
                 ArgumentError);
}
