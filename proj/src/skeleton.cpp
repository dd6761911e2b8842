#include "kinebench/skeleton.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "kinebench/error.hpp"
#include "kinebench/numio.hpp"

namespace kinebench::skeleton {

const JointSet& canonical_joint_set() {
    // Human3.6M-style 17-joint layout. Order is frozen: pose CSV columns and
    // harmonized frame layout depend on it.
    static const JointSet set{{
        "pelvis",
        "right_hip",
        "right_knee",
        "right_ankle",
        "left_hip",
        "left_knee",
        "left_ankle",
        "torso",
        "neck",
        "head",
        "head_top",
        "left_shoulder",
        "left_elbow",
        "left_wrist",
        "right_shoulder",
        "right_elbow",
        "right_wrist",
    }};
    return set;
}

bool is_canonical_joint(std::string_view name) {
    return canonical_joint_set().contains(name);
}

const MapEntry* HarmonizationMap::find_by_target(std::string_view target) const {
    for (const auto& e : entries)
        if (e.target == target) return &e;
    return nullptr;
}

std::string MapValidation::to_string() const {
    std::ostringstream os;
    auto emit = [&os](const char* label, const std::vector<std::string>& items) {
        if (items.empty()) return;
        os << label << ":";
        for (const auto& s : items) os << ' ' << s;
        os << "; ";
    };
    emit("unmapped required targets", unmapped_required);
    emit("duplicate targets", duplicate_targets);
    emit("unknown sources", unknown_sources);
    emit("non-canonical targets", non_canonical_targets);
    return os.str();
}

MapValidation validate_map(const HarmonizationMap& map, const JointSet& source,
                           std::span<const std::string> required) {
    MapValidation report;
    std::set<std::string> seen_targets;
    std::set<std::string> dup_reported;
    for (const auto& e : map.entries) {
        if (!source.contains(e.source)) report.unknown_sources.push_back(e.source);
        if (!is_canonical_joint(e.target)) report.non_canonical_targets.push_back(e.target);
        if (!seen_targets.insert(e.target).second && dup_reported.insert(e.target).second)
            report.duplicate_targets.push_back(e.target);
    }
    for (const auto& r : required) {
        if (!seen_targets.count(r)) report.unmapped_required.push_back(r);
    }
    return report;
}

PoseSequence harmonize(const PoseSequence& seq, const HarmonizationMap& map,
                       std::span<const std::string> required) {
    auto report = validate_map(map, seq.joint_set, required);
    if (!report.unknown_sources.empty()) throw MissingSourceJoint(report.unknown_sources.front());
    if (!report.unmapped_required.empty())
        throw MissingRequiredTarget(report.unmapped_required.front());
    if (!report.ok()) throw InvalidMap("invalid harmonization map: " + report.to_string());

    const auto& canon = canonical_joint_set();
    // Mapped targets in canonical order, each paired with its source index.
    std::vector<std::pair<std::string, std::size_t>> layout;
    for (const auto& target : canon.names) {
        if (const auto* entry = map.find_by_target(target))
            layout.emplace_back(target, *seq.joint_set.index_of(entry->source));
    }

    PoseSequence out;
    for (const auto& [target, _] : layout) out.joint_set.names.push_back(target);
    out.frame_rate_hz = seq.frame_rate_hz;
    const std::size_t frames = seq.frame_count();
    out.coords.resize(frames * layout.size());
    out.valid.resize(frames * layout.size());
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t j = 0; j < layout.size(); ++j) {
            const std::size_t src = layout[j].second;
            out.coords[f * layout.size() + j] = seq.at(f, src);
            out.valid[f * layout.size() + j] = seq.valid[f * seq.joint_set.size() + src];
        }
    }
    return out;
}

HarmonizationMap identity_map() {
    HarmonizationMap map;
    for (const auto& name : canonical_joint_set().names) map.entries.push_back({name, name});
    return map;
}

HarmonizationMap restrict_to_sources(const HarmonizationMap& map, const JointSet& source) {
    HarmonizationMap out;
    for (const auto& e : map.entries)
        if (source.contains(e.source)) out.entries.push_back(e);
    return out;
}

const HarmonizationMap& h36m_alias_map() {
    static const HarmonizationMap map{{
        {"neck_base", "neck"},
    }};
    return map;
}

HarmonizationMap name_matching_map(const JointSet& source) {
    HarmonizationMap out;
    std::set<std::string> taken;
    for (const auto& target : canonical_joint_set().names) {
        if (source.contains(target)) {
            out.entries.push_back({target, target});
            taken.insert(target);
        }
    }
    for (const auto& alias : h36m_alias_map().entries) {
        if (!taken.count(alias.target) && source.contains(alias.source)) {
            out.entries.push_back(alias);
            taken.insert(alias.target);
        }
    }
    return out;
}

const HarmonizationMap& default_bodytrack_map() {
    // Maxine AR SDK BodyTrack keypoints (34). 17 kept, 17 discarded (toes,
    // heels, eyes, one ear, hand landmarks). nose->head and left_ear->head_top
    // are stand-ins; neither joint participates in any shipped angle.
    static const HarmonizationMap map{{
        {"pelvis", "pelvis"},
        {"right_hip", "right_hip"},
        {"right_knee", "right_knee"},
        {"right_ankle", "right_ankle"},
        {"left_hip", "left_hip"},
        {"left_knee", "left_knee"},
        {"left_ankle", "left_ankle"},
        {"torso", "torso"},
        {"neck", "neck"},
        {"nose", "head"},
        {"left_ear", "head_top"},
        {"left_shoulder", "left_shoulder"},
        {"left_elbow", "left_elbow"},
        {"left_wrist", "left_wrist"},
        {"right_shoulder", "right_shoulder"},
        {"right_elbow", "right_elbow"},
        {"right_wrist", "right_wrist"},
    }};
    return map;
}

HarmonizationMap parse_map(std::string_view text) {
    HarmonizationMap map;
    std::size_t line_no = 0;
    for (auto raw : num::split_lines(text)) {
        ++line_no;
        auto line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = num::trim(line);
        if (line.empty()) continue;
        auto arrow = line.find("->");
        if (arrow == std::string_view::npos)
            throw InvalidMap("map line " + std::to_string(line_no) + ": expected 'source -> target'");
        auto source = num::trim(line.substr(0, arrow));
        auto target = num::trim(line.substr(arrow + 2));
        if (source.empty() || target.empty())
            throw InvalidMap("map line " + std::to_string(line_no) + ": empty joint name");
        map.entries.push_back({std::string(source), std::string(target)});
    }
    return map;
}

HarmonizationMap load_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open map file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_map(buf.str());
}

std::string serialize_map(const HarmonizationMap& map) {
    std::ostringstream os;
    for (const auto& e : map.entries) os << e.source << " -> " << e.target << '\n';
    return os.str();
}

} // namespace kinebench::skeleton
