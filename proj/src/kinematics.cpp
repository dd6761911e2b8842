#include "kinebench/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinebench/error.hpp"
#include "kinebench/numio.hpp"

namespace kinebench::kinematics {

bool ActivityAngleMap::has(std::string_view activity_id) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const auto& e) { return e.first == activity_id; });
}

const std::string& ActivityAngleMap::angle_for(std::string_view activity_id) const {
    for (const auto& e : entries)
        if (e.first == activity_id) return e.second;
    throw UnknownActivity(std::string(activity_id));
}

const std::vector<AngleDefinition>& builtin_angle_definitions() {
    static const std::vector<AngleDefinition> defs{
        {"arm_flex_r", "right_shoulder", "right_elbow", "neck", "torso"},
        {"arm_flex_l", "left_shoulder", "left_elbow", "neck", "torso"},
        {"elbow_flex_r", "right_shoulder", "right_elbow", "right_elbow", "right_wrist"},
        {"elbow_flex_l", "left_shoulder", "left_elbow", "left_elbow", "left_wrist"},
        {"knee_angle_r", "right_hip", "right_knee", "right_knee", "right_ankle"},
        {"knee_angle_l", "left_hip", "left_knee", "left_knee", "left_ankle"},
    };
    return defs;
}

const AngleDefinition& find_angle_definition(std::string_view name,
                                             std::span<const AngleDefinition> defs) {
    for (const auto& d : defs)
        if (d.angle_name == name) return d;
    throw UnknownAngle(std::string(name));
}

const AngleDefinition& find_angle_definition(std::string_view name) {
    return find_angle_definition(name, builtin_angle_definitions());
}

const ActivityAngleMap& builtin_activity_angle_map() {
    static const ActivityAngleMap map{{
        {"A01", "knee_angle_l"},
        {"A02", "knee_angle_r"},
        {"A03", "knee_angle_l"},
        {"A04", "knee_angle_r"},
        {"A05", "elbow_flex_r"},
        {"A06", "elbow_flex_l"},
        {"A07", "arm_flex_r"},
        {"A08", "arm_flex_l"},
        {"A09", "elbow_flex_r"},
        {"A10", "arm_flex_r"},
        {"A11", "arm_flex_r"},
        {"A12", "arm_flex_l"},
        {"A13", "arm_flex_r"},
    }};
    return map;
}

std::string_view activity_legend(std::string_view activity_id) {
    static const std::vector<std::pair<std::string_view, std::string_view>> legends{
        {"A01", "walk_forward"},     {"A02", "walk_backward"},
        {"A03", "walk_along"},       {"A04", "sit_to_stand"},
        {"A05", "move_right_arm"},   {"A06", "move_left_arm"},
        {"A07", "drink_right_arm"},  {"A08", "drink_left_arm"},
        {"A09", "assemble_both_arms"}, {"A10", "throw_both_arms"},
        {"A11", "reachup_right_arm"}, {"A12", "reachup_left_arm"},
        {"A13", "tear_both_arms"},
    };
    for (const auto& [id, legend] : legends)
        if (id == activity_id) return legend;
    return {};
}

AngleSeries joint_angle(const PoseSequence& seq, const AngleDefinition& def, double epsilon) {
    auto index_or_throw = [&seq](const std::string& marker) {
        auto idx = seq.joint_set.index_of(marker);
        if (!idx) throw UnknownMarker(marker);
        return *idx;
    };
    const std::size_t i1 = index_or_throw(def.m1);
    const std::size_t i2 = index_or_throw(def.m2);
    const std::size_t i3 = index_or_throw(def.m3);
    const std::size_t i4 = index_or_throw(def.m4);

    const std::size_t frames = seq.frame_count();
    AngleSeries out;
    out.values.assign(frames, 0.0);
    out.valid.assign(frames, 0);
    out.sample_rate_hz = seq.frame_rate_hz;
    out.label = def.angle_name;

    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    for (std::size_t f = 0; f < frames; ++f) {
        if (!(seq.is_valid(f, i1) && seq.is_valid(f, i2) && seq.is_valid(f, i3) &&
              seq.is_valid(f, i4)))
            continue;
        const Vec3 v1 = seq.at(f, i2) - seq.at(f, i1);
        const Vec3 v2 = seq.at(f, i4) - seq.at(f, i3);
        const double n1 = norm(v1);
        const double n2 = norm(v2);
        if (n1 < epsilon || n2 < epsilon) continue;
        const double c = std::clamp(dot(v1, v2) / (n1 * n2), -1.0, 1.0);
        out.values[f] = std::acos(c) * rad_to_deg;
        out.valid[f] = 1;
    }
    return out;
}

TimedAngleSeries frames_to_time(const AngleSeries& series) {
    TimedAngleSeries out;
    out.value_deg = series.values;
    out.valid = series.valid;
    out.label = series.label;
    out.time_s.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        out.time_s[i] = static_cast<double>(i) / series.sample_rate_hz;
    return out;
}

AngleConfig parse_angle_config(std::string_view text) {
    AngleConfig config;
    std::size_t line_no = 0;
    for (auto raw : num::split_lines(text)) {
        ++line_no;
        auto line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = num::trim(line);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw Error("angle config line " + std::to_string(line_no) + ": expected 'key: value'");
        auto key = num::trim(line.substr(0, colon));
        auto value = num::trim(line.substr(colon + 1));
        if (key.empty() || value.empty())
            throw Error("angle config line " + std::to_string(line_no) + ": empty key or value");
        if (value.find(',') != std::string_view::npos) {
            auto markers = num::split(value, ',');
            if (markers.size() != 4)
                throw Error("angle config line " + std::to_string(line_no) +
                            ": expected 4 markers, got " + std::to_string(markers.size()));
            AngleDefinition def;
            def.angle_name = std::string(key);
            def.m1 = std::string(num::trim(markers[0]));
            def.m2 = std::string(num::trim(markers[1]));
            def.m3 = std::string(num::trim(markers[2]));
            def.m4 = std::string(num::trim(markers[3]));
            if (def.m1 == def.m2 || def.m3 == def.m4)
                throw Error("angle config line " + std::to_string(line_no) +
                            ": bone vector endpoints must differ");
            config.definitions.push_back(std::move(def));
        } else {
            config.activity_entries.emplace_back(std::string(key), std::string(value));
        }
    }
    return config;
}

std::vector<AngleDefinition> merged_definitions(const AngleConfig& config) {
    std::vector<AngleDefinition> defs = builtin_angle_definitions();
    for (const auto& override_def : config.definitions) {
        auto it = std::find_if(defs.begin(), defs.end(), [&](const AngleDefinition& d) {
            return d.angle_name == override_def.angle_name;
        });
        if (it != defs.end())
            *it = override_def;
        else
            defs.push_back(override_def);
    }
    return defs;
}

ActivityAngleMap merged_activity_map(const AngleConfig& config) {
    ActivityAngleMap map = builtin_activity_angle_map();
    for (const auto& [activity, angle] : config.activity_entries) {
        auto it = std::find_if(map.entries.begin(), map.entries.end(),
                               [&](const auto& e) { return e.first == activity; });
        if (it != map.entries.end())
            it->second = angle;
        else
            map.entries.emplace_back(activity, angle);
    }
    std::sort(map.entries.begin(), map.entries.end());
    return map;
}

} // namespace kinebench::kinematics
