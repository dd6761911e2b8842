#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kinebench/align.hpp"
#include "kinebench/dsp.hpp"
#include "kinebench/metrics.hpp"
#include "kinebench/types.hpp"

// Parsers for model pose outputs and IMU motion files, plus the run manifest.
// Parsers are pure per-file; distinct files may be parsed concurrently.

namespace kinebench::ingest {

// Canonical pose CSV: header `frame,<j>_x,<j>_y,<j>_z,...` (the leading frame
// column is optional on read), one row per frame, empty or non-numeric cells
// mark that joint-sample invalid. Throws MalformedHeader / RaggedRow /
// NoFrames. When `expected` is given, every expected joint must be present.
PoseSequence read_pose_csv(const std::filesystem::path& path, double frame_rate_hz,
                           const JointSet* expected = nullptr);
PoseSequence parse_pose_csv(std::string_view text, double frame_rate_hz,
                            const JointSet* expected = nullptr);

// Emits the canonical format: frame column, full round-trip precision, LF
// line endings, invalid samples as empty cells.
std::string pose_to_csv(const PoseSequence& seq);
void write_pose_csv(const PoseSequence& seq, const std::filesystem::path& path);

// OpenSim motion text: free-form header lines terminated by `endheader`, a
// column-name row, then numeric rows (tab or space delimited).
struct MotTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> rows; // row-major, |column_names| each
    bool in_degrees = true;

    std::optional<std::size_t> column_index(std::string_view name) const;
};

MotTable read_mot(const std::filesystem::path& path);
MotTable parse_mot(std::string_view text);

// Column values as an AngleSeries at rate_hz (converted to degrees when the
// table is in radians); non-finite cells marked invalid. Throws UnknownColumn.
AngleSeries extract_imu_angle(const MotTable& table, const std::string& column, double rate_hz);

enum class ModelKind { h36m17_generic, bodytrack34 };

std::optional<ModelKind> parse_model_kind(std::string_view name);
std::string_view model_kind_name(ModelKind kind);

// Rewrites a model's CSV export as a canonical pose CSV. Operates on cell
// tokens, so values pass through byte-identically. The joint mapping comes
// from map_path when given, otherwise from the kind's builtin map restricted
// to the joints actually present. Throws UnknownModelKind and the pose CSV
// parse errors.
void convert_model_output(const std::filesystem::path& input, ModelKind kind,
                          const std::filesystem::path& output,
                          const std::optional<std::filesystem::path>& map_path = {});
std::string convert_model_csv(std::string_view text, ModelKind kind,
                              const std::optional<std::filesystem::path>& map_path = {});

struct TrialSpec {
    std::string subject_id;
    std::string activity_id;
    std::string model_name;
    std::filesystem::path pose_file_path;
    std::filesystem::path imu_file_path;
    std::string imu_column_name;
    double video_rate_hz = 30.0;
    double imu_rate_hz = 50.0;
    std::optional<std::filesystem::path> harmonization_map_path;
};

struct TrialManifest {
    std::vector<TrialSpec> trials;
    dsp::FilterConfig filter_config;
    align::AlignmentConfig alignment_config;
    std::filesystem::path output_dir = "kinebench_out";
    metrics::StdFlavor std_flavor = metrics::StdFlavor::population;
};

// JSON manifest with snake_case keys; relative paths resolve against the
// manifest's directory; all referenced files must exist. Throws SchemaError /
// UnresolvablePath / UnknownActivity.
TrialManifest load_manifest(const std::filesystem::path& path);
TrialManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
std::string serialize_manifest(const TrialManifest& manifest);

} // namespace kinebench::ingest
