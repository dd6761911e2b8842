#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kinebench/error.hpp"
#include "kinebench/kinematics.hpp"
#include "kinebench/skeleton.hpp"
#include "kinebench/testkit.hpp"

#include "common.hpp"

using namespace kinebench;
namespace km = kinebench::kinematics;

namespace {

// one-frame pose with just the four markers of a definition placed explicitly
PoseSequence four_marker_pose(const km::AngleDefinition& def, Vec3 p1, Vec3 p2, Vec3 p3, Vec3 p4) {
    auto seq = PoseSequence::make(skeleton::canonical_joint_set(), 1, 30.0);
    seq.at(0, *seq.joint_set.index_of(def.m1)) = p1;
    seq.at(0, *seq.joint_set.index_of(def.m2)) = p2;
    seq.at(0, *seq.joint_set.index_of(def.m3)) = p3;
    seq.at(0, *seq.joint_set.index_of(def.m4)) = p4;
    return seq;
}

struct Quat {
    double w, x, y, z;
};

Vec3 rotate(const Quat& q, const Vec3& v) {
    // q * (0,v) * conj(q)
    const Vec3 u{q.x, q.y, q.z};
    const Vec3 t = 2.0 * Vec3{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
    const Vec3 ut{u.y * t.z - u.z * t.y, u.z * t.x - u.x * t.z, u.x * t.y - u.y * t.x};
    return v + q.w * t + ut;
}

Quat random_unit_quat(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double u1 = u(rng), u2 = u(rng), u3 = u(rng);
    const double two_pi = 2.0 * std::numbers::pi;
    return {std::sqrt(1 - u1) * std::sin(two_pi * u2), std::sqrt(1 - u1) * std::cos(two_pi * u2),
            std::sqrt(u1) * std::sin(two_pi * u3), std::sqrt(u1) * std::cos(two_pi * u3)};
}

} // namespace

TEST_CASE("builtin angle definitions match the shipped table") {
    const auto& defs = km::builtin_angle_definitions();
    CHECK(defs.size() == 6);

    const auto& elbow_r = km::find_angle_definition("elbow_flex_r");
    CHECK(elbow_r.m1 == "right_shoulder");
    CHECK(elbow_r.m2 == "right_elbow");
    CHECK(elbow_r.m3 == "right_elbow");
    CHECK(elbow_r.m4 == "right_wrist");

    const auto& knee_l = km::find_angle_definition("knee_angle_l");
    CHECK(knee_l.m1 == "left_hip");
    CHECK(knee_l.m2 == "left_knee");
    CHECK(knee_l.m3 == "left_knee");
    CHECK(knee_l.m4 == "left_ankle");

    const auto& arm_r = km::find_angle_definition("arm_flex_r");
    CHECK(arm_r.m1 == "right_shoulder");
    CHECK(arm_r.m2 == "right_elbow");
    CHECK(arm_r.m3 == "neck");
    CHECK(arm_r.m4 == "torso");

    // every marker is canonical and bone endpoints differ
    for (const auto& d : defs) {
        for (const auto& m : {d.m1, d.m2, d.m3, d.m4}) CHECK(skeleton::is_canonical_joint(m));
        CHECK(d.m1 != d.m2);
        CHECK(d.m3 != d.m4);
    }

    CHECK_THROWS_AS(km::find_angle_definition("no_such_angle"), UnknownAngle);
}

TEST_CASE("builtin activity map") {
    const auto& map = km::builtin_activity_angle_map();
    CHECK(map.angle_for("A01") == "knee_angle_l");
    CHECK(map.angle_for("A02") == "knee_angle_r");
    CHECK(map.angle_for("A03") == "knee_angle_l");
    CHECK(map.angle_for("A04") == "knee_angle_r");
    CHECK(map.angle_for("A05") == "elbow_flex_r");
    CHECK(map.angle_for("A06") == "elbow_flex_l");
    CHECK(map.angle_for("A07") == "arm_flex_r");
    CHECK(map.angle_for("A08") == "arm_flex_l");
    CHECK(map.angle_for("A09") == "elbow_flex_r");
    CHECK(map.angle_for("A10") == "arm_flex_r");
    CHECK(map.angle_for("A11") == "arm_flex_r");
    CHECK(map.angle_for("A12") == "arm_flex_l");
    CHECK(map.angle_for("A13") == "arm_flex_r");
    CHECK(map.entries.size() == 13);

    CHECK_FALSE(map.has("A99"));
    CHECK_THROWS_AS(map.angle_for("A99"), UnknownActivity);
}

TEST_CASE("activity legends") {
    CHECK(km::activity_legend("A01") == "walk_forward");
    CHECK(km::activity_legend("A13") == "tear_both_arms");
    CHECK(km::activity_legend("A99").empty());
}

TEST_CASE("joint_angle on right angles and collinear bones") {
    // arm_flex_r: all four markers are distinct joints, so the bone vectors
    // can be placed freely
    const auto& def = km::find_angle_definition("arm_flex_r");

    SUBCASE("perpendicular bones -> 90") {
        auto seq = four_marker_pose(def, {0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 1, 0});
        auto out = km::joint_angle(seq, def);
        CHECK(out.valid[0]);
        CHECK(out.values[0] == doctest::Approx(90.0).epsilon(1e-12));
    }
    SUBCASE("elbow-style definitions share the pivot marker") {
        const auto& elbow = km::find_angle_definition("elbow_flex_r");
        auto seq = PoseSequence::make(skeleton::canonical_joint_set(), 1, 30.0);
        seq.at(0, *seq.joint_set.index_of("right_shoulder")) = {0, 1, 0};
        seq.at(0, *seq.joint_set.index_of("right_elbow")) = {0, 0, 0};
        seq.at(0, *seq.joint_set.index_of("right_wrist")) = {1, 0, 0};
        auto out = km::joint_angle(seq, elbow);
        CHECK(out.values[0] == doctest::Approx(90.0).epsilon(1e-12));
    }
    SUBCASE("parallel bones -> 0") {
        auto seq = four_marker_pose(def, {0, 0, 0}, {1, 0, 0}, {5, 2, 2}, {7, 2, 2});
        auto out = km::joint_angle(seq, def);
        CHECK(out.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("opposite bones -> 180") {
        auto seq = four_marker_pose(def, {0, 0, 0}, {1, 0, 0}, {5, 2, 2}, {3, 2, 2});
        auto out = km::joint_angle(seq, def);
        CHECK(out.values[0] == doctest::Approx(180.0).epsilon(1e-12));
    }
}

TEST_CASE("joint_angle matches the analytic hinge to 1e-9 degrees") {
    testkit::SynthSpec spec;
    spec.motion = testkit::Motion::sinusoid_knee;
    spec.amplitude_deg = 30.0;
    spec.frequency_hz = 0.5;
    spec.duration_s = 10.0;
    spec.rate_hz = 30.0;
    auto synth = testkit::synth_pose(spec);

    const auto& def = km::find_angle_definition(synth.angle_name);
    auto out = km::joint_angle(synth.pose, def);
    REQUIRE(out.size() == synth.analytic.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        REQUIRE(out.valid[i]);
        worst = std::max(worst, std::abs(out.values[i] - synth.analytic.values[i]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("joint_angle invalid propagation and degenerate bones") {
    const auto& def = km::find_angle_definition("knee_angle_l");

    SUBCASE("invalid contributing joint -> invalid sample") {
        auto seq = four_marker_pose(def, {0, 1, 0}, {0, 0, 0}, {0, 0, 0}, {1, 0, 0});
        seq.set_valid(0, *seq.joint_set.index_of(def.m4), false);
        auto out = km::joint_angle(seq, def);
        CHECK_FALSE(out.valid[0]);
    }
    SUBCASE("near-zero bone -> invalid sample") {
        auto seq = four_marker_pose(def, {0, 1, 0}, {0, 0, 0}, {0, 0, 0}, {1e-12, 0, 0});
        auto out = km::joint_angle(seq, def);
        CHECK_FALSE(out.valid[0]);
    }
    SUBCASE("missing marker -> UnknownMarker") {
        JointSet tiny{{"left_hip", "left_knee"}};
        auto seq = PoseSequence::make(tiny, 1, 30.0);
        CHECK_THROWS_AS(km::joint_angle(seq, def), UnknownMarker);
    }
}

TEST_CASE("joint_angle invariances") {
    testkit::SynthSpec spec;
    spec.amplitude_deg = 45.0;
    spec.frequency_hz = 1.0;
    spec.duration_s = 3.0;
    auto synth = testkit::synth_pose(spec);
    const auto& def = km::find_angle_definition(synth.angle_name);
    const auto base = km::joint_angle(synth.pose, def);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);

    SUBCASE("rigid motion and uniform scale leave angles unchanged") {
        for (int rep = 0; rep < 5; ++rep) {
            const Quat q = random_unit_quat(rng);
            const Vec3 shift{u(rng), u(rng), u(rng)};
            const double scale = std::exp(u(rng));
            PoseSequence moved = synth.pose;
            for (auto& p : moved.coords) p = scale * rotate(q, p) + shift;
            auto out = km::joint_angle(moved, def);
            for (std::size_t i = 0; i < out.size(); ++i)
                CHECK(std::abs(out.values[i] - base.values[i]) < 1e-9);
        }
    }
    SUBCASE("angles stay in [0, 180]") {
        for (double v : base.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 180.0);
        }
    }
    SUBCASE("swapping the two bones leaves the angle unchanged") {
        km::AngleDefinition swapped{"swapped", def.m3, def.m4, def.m1, def.m2};
        auto out = km::joint_angle(synth.pose, swapped);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.values[i] == doctest::Approx(base.values[i]).epsilon(1e-12));
    }
    SUBCASE("negating one bone maps theta to 180 - theta") {
        km::AngleDefinition negated{"negated", def.m2, def.m1, def.m3, def.m4};
        auto out = km::joint_angle(synth.pose, negated);
        for (std::size_t i = 0; i < out.size(); ++i)
            CHECK(out.values[i] == doctest::Approx(180.0 - base.values[i]).epsilon(1e-10));
    }
}

TEST_CASE("frames_to_time") {
    SUBCASE("30 Hz, sample 90 -> 3 s") {
        auto s = kbtest::series(std::vector<double>(100, 1.0), 30.0);
        auto timed = km::frames_to_time(s);
        CHECK(timed.time_s[90] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(timed.time_s[0] == 0.0);
        CHECK(timed.value_deg == s.values);
    }
    SUBCASE("50 Hz, sample 50 -> 1 s") {
        auto s = kbtest::series(std::vector<double>(60, 1.0), 50.0);
        auto timed = km::frames_to_time(s);
        CHECK(timed.time_s[50] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("angle config text format") {
    const char* text =
        "# override one definition and one activity\n"
        "knee_angle_l: left_hip, left_knee, left_knee, left_ankle\n"
        "custom_angle: neck, torso, left_hip, left_knee\n"
        "A01: custom_angle\n";
    auto config = km::parse_angle_config(text);
    REQUIRE(config.definitions.size() == 2);
    CHECK(config.definitions[1].angle_name == "custom_angle");
    REQUIRE(config.activity_entries.size() == 1);

    auto defs = km::merged_definitions(config);
    CHECK(defs.size() == 7); // 6 builtin, one replaced in place, one new
    auto map = km::merged_activity_map(config);
    CHECK(map.angle_for("A01") == "custom_angle");
    CHECK(map.angle_for("A02") == "knee_angle_r");

    CHECK_THROWS_AS(km::parse_angle_config("bad line without colon\n"), Error);
    CHECK_THROWS_AS(km::parse_angle_config("bad: a,b,c\n"), Error);
    CHECK_THROWS_AS(km::parse_angle_config("bad: a,a,b,c\n"), Error);
}
