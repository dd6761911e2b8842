#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kinebench/types.hpp"

// Canonical 17-joint skeleton and harmonization of model-native joint sets
// onto it. All operations are pure; types are treated as immutable after
// construction and are safe to share across threads.

namespace kinebench::skeleton {

// The fixed canonical joint set (17 names, stable order). The order also
// fixes the column layout of canonical pose CSV files.
const JointSet& canonical_joint_set();

bool is_canonical_joint(std::string_view name);

struct MapEntry {
    std::string source;
    std::string target;
    friend bool operator==(const MapEntry&, const MapEntry&) = default;
};

// Renames source joints onto canonical names. Source joints without an entry
// are always discarded. Entries may carry duplicates or unknown names until
// validated; harmonize() rejects such maps.
struct HarmonizationMap {
    std::vector<MapEntry> entries;

    const MapEntry* find_by_target(std::string_view target) const;
    friend bool operator==(const HarmonizationMap&, const HarmonizationMap&) = default;
};

struct MapValidation {
    std::vector<std::string> unmapped_required;
    std::vector<std::string> duplicate_targets;
    std::vector<std::string> unknown_sources;
    std::vector<std::string> non_canonical_targets;

    bool ok() const {
        return unmapped_required.empty() && duplicate_targets.empty() &&
               unknown_sources.empty() && non_canonical_targets.empty();
    }
    std::string to_string() const;
};

// Never throws; empty report iff harmonize(seq-with-source, map, required)
// would succeed.
MapValidation validate_map(const HarmonizationMap& map, const JointSet& source,
                           std::span<const std::string> required = {});

// Applies the map: output carries the mapped canonical joints in canonical
// order, coordinates and validity copied bit-identically, frame count and
// rate unchanged. Throws MissingSourceJoint / MissingRequiredTarget /
// InvalidMap per the validation report.
PoseSequence harmonize(const PoseSequence& seq, const HarmonizationMap& map,
                       std::span<const std::string> required = {});

// source -> source for every canonical joint.
HarmonizationMap identity_map();

// Drops entries whose source is absent from `source`. Used to apply alias
// tables to files that contain only one of several alternative spellings.
HarmonizationMap restrict_to_sources(const HarmonizationMap& map, const JointSet& source);

// Best-effort name-matching map for an arbitrary source set: canonical names
// map to themselves, known aliases (e.g. neck_base) to their canonical joint.
HarmonizationMap name_matching_map(const JointSet& source);

// Best-effort NVIDIA BodyTrack 34-marker map. The marker names follow the
// Maxine AR SDK keypoint list; head/head_top use the nearest skull markers
// since the SDK has no direct equivalent. Unverified against the original
// conversion scripts; override with a map file where exactness matters.
const HarmonizationMap& default_bodytrack_map();

// Aliases applied on top of identity matching for Human3.6M-style exports.
const HarmonizationMap& h36m_alias_map();

// Map file format: one `source -> target` per line, `#` starts a comment,
// blank lines ignored.
HarmonizationMap parse_map(std::string_view text);
HarmonizationMap load_map(const std::filesystem::path& path);
std::string serialize_map(const HarmonizationMap& map);

} // namespace kinebench::skeleton
