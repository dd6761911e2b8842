#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinebench/types.hpp"

// Joint-angle trajectories from 3D poses: the two-bone-vector arccosine
// formula plus the activity -> angle resolution tables.

namespace kinebench::kinematics {

// Four canonical joint names defining the two bone vectors of an angle:
// v1 = p(m2) - p(m1), v2 = p(m4) - p(m3).
struct AngleDefinition {
    std::string angle_name;
    std::string m1, m2, m3, m4;
    friend bool operator==(const AngleDefinition&, const AngleDefinition&) = default;
};

// activity id (A01..A13) -> angle name, ordered by activity id.
struct ActivityAngleMap {
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(std::string_view activity_id) const;
    // Throws UnknownActivity.
    const std::string& angle_for(std::string_view activity_id) const;
};

// The six shipped angle definitions.
const std::vector<AngleDefinition>& builtin_angle_definitions();

// Throws UnknownAngle.
const AngleDefinition& find_angle_definition(std::string_view name,
                                             std::span<const AngleDefinition> defs);
const AngleDefinition& find_angle_definition(std::string_view name);

const ActivityAngleMap& builtin_activity_angle_map();

// Human-readable activity legend ("walk_forward" for A01); empty if unknown.
std::string_view activity_legend(std::string_view activity_id);

// Bone vectors shorter than this (in the pose's length units) mark the sample
// invalid instead of producing a meaningless angle.
inline constexpr double kDegenerateBoneEpsilon = 1e-9;

// Angle between the two bone vectors per frame, in degrees. The cosine is
// clamped to [-1, 1] before arccos. A sample is invalid when any contributing
// joint sample is invalid or either bone vector is degenerate; its value is 0.
// Throws UnknownMarker.
AngleSeries joint_angle(const PoseSequence& seq, const AngleDefinition& def,
                        double epsilon = kDegenerateBoneEpsilon);

struct TimedAngleSeries {
    std::vector<double> time_s;
    std::vector<double> value_deg;
    std::vector<std::uint8_t> valid;
    std::string label;
};

// Timestamp of sample i is i / sample_rate_hz seconds; values unchanged.
TimedAngleSeries frames_to_time(const AngleSeries& series);

// Text config overriding the compiled-in tables. Two line formats, with `#`
// comments and blank lines ignored:
//   angle_name: m1,m2,m3,m4
//   Axx: angle_name
struct AngleConfig {
    std::vector<AngleDefinition> definitions;
    std::vector<std::pair<std::string, std::string>> activity_entries;
};

AngleConfig parse_angle_config(std::string_view text);

// Builtin tables with config entries overriding same-name rows.
std::vector<AngleDefinition> merged_definitions(const AngleConfig& config);
ActivityAngleMap merged_activity_map(const AngleConfig& config);

} // namespace kinebench::kinematics
