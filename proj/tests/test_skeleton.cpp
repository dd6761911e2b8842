#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kinebench/error.hpp"
#include "kinebench/skeleton.hpp"

#include "common.hpp"

using namespace kinebench;
namespace sk = kinebench::skeleton;

namespace {

// the Maxine AR SDK BodyTrack keypoint list
std::vector<std::string> bodytrack_names() {
    return {"pelvis", "left_hip", "right_hip", "torso", "left_knee", "right_knee", "neck",
            "left_ankle", "right_ankle", "left_big_toe", "right_big_toe", "left_small_toe",
            "right_small_toe", "left_heel", "right_heel", "nose", "left_eye", "right_eye",
            "left_ear", "right_ear", "left_shoulder", "right_shoulder", "left_elbow",
            "right_elbow", "left_wrist", "right_wrist", "left_pinky_knuckle",
            "right_pinky_knuckle", "left_middle_tip", "right_middle_tip", "left_index_knuckle",
            "right_index_knuckle", "left_thumb_tip", "right_thumb_tip"};
}

} // namespace

TEST_CASE("canonical joint set") {
    const auto& set = sk::canonical_joint_set();
    CHECK(set.size() == 17);
    for (const char* required :
         {"right_shoulder", "left_shoulder", "right_elbow", "left_elbow", "right_wrist",
          "left_wrist", "right_hip", "left_hip", "right_knee", "left_knee", "right_ankle",
          "left_ankle", "neck", "torso"})
        CHECK(set.contains(required));

    // stable across calls
    CHECK(sk::canonical_joint_set().names == set.names);

    // unique names
    for (const auto& name : set.names)
        CHECK(std::count(set.names.begin(), set.names.end(), name) == 1);
}

TEST_CASE("harmonize maps 34 bodytrack joints to 17") {
    JointSet bt{bodytrack_names()};
    auto seq = PoseSequence::make(bt, 5, 30.0);
    for (std::size_t f = 0; f < 5; ++f)
        for (std::size_t j = 0; j < bt.size(); ++j)
            seq.at(f, j) = {0.1 * static_cast<double>(j), static_cast<double>(f), -1.0};

    auto out = sk::harmonize(seq, sk::default_bodytrack_map());
    CHECK(out.joint_set.size() == 17);
    CHECK(out.joint_set == sk::canonical_joint_set());
    CHECK(out.frame_count() == 5);
    CHECK(out.frame_rate_hz == 30.0);

    // coordinates pass through bit-exactly
    const auto src_idx = *bt.index_of("left_knee");
    const auto dst_idx = *out.joint_set.index_of("left_knee");
    for (std::size_t f = 0; f < 5; ++f) CHECK(out.at(f, dst_idx) == seq.at(f, src_idx));
}

TEST_CASE("harmonize identity map is a no-op on canonical input") {
    auto seq = PoseSequence::make(sk::canonical_joint_set(), 3, 30.0);
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t j = 0; j < 17; ++j)
            seq.at(f, j) = {1.0 + static_cast<double>(j), -2.0, static_cast<double>(f)};

    auto out = sk::harmonize(seq, sk::identity_map());
    CHECK(out.joint_set == seq.joint_set);
    CHECK(out.coords == seq.coords);
    CHECK(out.valid == seq.valid);

    // idempotent
    auto again = sk::harmonize(out, sk::identity_map());
    CHECK(again.coords == out.coords);
}

TEST_CASE("harmonize exact pass-through of a marked joint") {
    JointSet bt{bodytrack_names()};
    auto seq = PoseSequence::make(bt, 4, 30.0);
    const auto ridx = *bt.index_of("right_wrist");
    for (std::size_t f = 0; f < 4; ++f) seq.at(f, ridx) = {1.5, -2.0, 0.25};

    auto out = sk::harmonize(seq, sk::default_bodytrack_map());
    const auto oidx = *out.joint_set.index_of("right_wrist");
    for (std::size_t f = 0; f < 4; ++f) {
        CHECK(out.at(f, oidx).x == 1.5);
        CHECK(out.at(f, oidx).y == -2.0);
        CHECK(out.at(f, oidx).z == 0.25);
    }
}

TEST_CASE("harmonize output never grows the joint set") {
    JointSet bt{bodytrack_names()};
    auto seq = PoseSequence::make(bt, 2, 30.0);
    auto out = sk::harmonize(seq, sk::default_bodytrack_map());
    CHECK(out.joint_set.size() <= seq.joint_set.size());
}

TEST_CASE("harmonize errors") {
    auto seq = PoseSequence::make(sk::canonical_joint_set(), 2, 30.0);

    SUBCASE("missing source joint") {
        sk::HarmonizationMap map{{{"no_such_joint", "neck"}}};
        CHECK_THROWS_AS(sk::harmonize(seq, map), MissingSourceJoint);
    }
    SUBCASE("missing required target") {
        sk::HarmonizationMap map{{{"neck", "neck"}}};
        const std::vector<std::string> required{"right_knee"};
        CHECK_THROWS_AS(sk::harmonize(seq, map, required), MissingRequiredTarget);
    }
    SUBCASE("duplicate targets rejected") {
        sk::HarmonizationMap map{{{"neck", "neck"}, {"head", "neck"}}};
        CHECK_THROWS_AS(sk::harmonize(seq, map), InvalidMap);
    }
    SUBCASE("non-canonical target rejected") {
        sk::HarmonizationMap map{{{"neck", "yeck"}}};
        CHECK_THROWS_AS(sk::harmonize(seq, map), InvalidMap);
    }
}

TEST_CASE("validate_map reports instead of throwing") {
    const auto& canon = sk::canonical_joint_set();

    SUBCASE("complete map -> empty report") {
        auto report = sk::validate_map(sk::identity_map(), canon);
        CHECK(report.ok());
    }
    SUBCASE("missing required target is named") {
        sk::HarmonizationMap map = sk::identity_map();
        std::erase_if(map.entries, [](const auto& e) { return e.target == "right_knee"; });
        const std::vector<std::string> required{"right_knee"};
        auto report = sk::validate_map(map, canon, required);
        REQUIRE(report.unmapped_required.size() == 1);
        CHECK(report.unmapped_required[0] == "right_knee");
        CHECK_FALSE(report.ok());
    }
    SUBCASE("duplicate target reported once") {
        sk::HarmonizationMap map{{{"neck", "neck"}, {"head", "neck"}}};
        auto report = sk::validate_map(map, canon);
        REQUIRE(report.duplicate_targets.size() == 1);
        CHECK(report.duplicate_targets[0] == "neck");
    }
    SUBCASE("unknown source reported") {
        sk::HarmonizationMap map{{{"nope", "neck"}}};
        auto report = sk::validate_map(map, canon);
        REQUIRE(report.unknown_sources.size() == 1);
        CHECK(report.unknown_sources[0] == "nope");
    }
}

TEST_CASE("map file parse and serialize round-trip") {
    const char* text =
        "# comment line\n"
        "\n"
        "nose -> head   # trailing comment\n"
        "left_hip->left_hip\n";
    auto map = sk::parse_map(text);
    REQUIRE(map.entries.size() == 2);
    CHECK(map.entries[0] == sk::MapEntry{"nose", "head"});
    CHECK(map.entries[1] == sk::MapEntry{"left_hip", "left_hip"});

    auto again = sk::parse_map(sk::serialize_map(map));
    CHECK(again == map);

    CHECK_THROWS_AS(sk::parse_map("no arrow here\n"), InvalidMap);
}

TEST_CASE("map file io") {
    kbtest::TempDir tmp("skeleton");
    const auto path = tmp.path() / "bt.map";
    kbtest::write_file(path, sk::serialize_map(sk::default_bodytrack_map()));
    auto loaded = sk::load_map(path);
    CHECK(loaded == sk::default_bodytrack_map());
}

TEST_CASE("name matching map picks canonical names and aliases") {
    JointSet source{{"neck_base", "torso", "left_knee", "extraneous"}};
    auto map = sk::name_matching_map(source);
    auto report = sk::validate_map(map, source);
    CHECK(report.ok());
    REQUIRE(map.find_by_target("neck") != nullptr);
    CHECK(map.find_by_target("neck")->source == "neck_base");
    CHECK(map.find_by_target("torso") != nullptr);
    CHECK(map.find_by_target("left_knee") != nullptr);
    CHECK(map.find_by_target("extraneous") == nullptr);
}
