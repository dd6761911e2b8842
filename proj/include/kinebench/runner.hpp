#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinebench/align.hpp"
#include "kinebench/ingest.hpp"
#include "kinebench/kinematics.hpp"
#include "kinebench/metrics.hpp"
#include "kinebench/types.hpp"

// Wires ingestion -> harmonization -> kinematics -> dsp -> align -> metrics
// -> report into reproducible batch runs. Trials are independent work units;
// results are aggregated and emitted in manifest order regardless of
// completion order, so output bytes do not depend on --jobs.

namespace kinebench::runner {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct TrialOutcome {
    enum class Status { ok, skipped, failed };
    Status status = Status::failed;
    std::string reason; // empty on ok
    double elapsed_ms = 0.0;
    std::optional<metrics::MetricsRecord> record;
    // aligned, filtered pair kept for overlay plots
    std::optional<AngleSeries> aligned_ref;
    std::optional<AngleSeries> aligned_est;
};

struct RunOptions {
    int jobs = 1;
    bool verbose = false;
    std::optional<std::filesystem::path> output_dir_override;
    std::optional<std::filesystem::path> angle_config_path;
};

struct RunResult {
    std::vector<TrialOutcome> outcomes; // one per manifest trial, manifest order
    std::vector<metrics::MetricsRecord> records; // successful trials only
    std::filesystem::path output_dir;
    std::size_t ok_count() const;
};

// The per-trial pipeline. Video branch: read pose -> harmonize -> joint angle
// -> interpolate -> median -> moving average -> mean removal. IMU branch:
// read .mot -> extract column -> interpolate -> resample -> median -> moving
// average -> mean removal. Then offset search, trim, metrics.
TrialOutcome run_trial(const ingest::TrialSpec& trial, const dsp::FilterConfig& filter_config,
                       const align::AlignmentConfig& alignment_config,
                       std::span<const kinematics::AngleDefinition> definitions,
                       const kinematics::ActivityAngleMap& activity_map);

RunResult run_manifest(const ingest::TrialManifest& manifest, const RunOptions& options = {});

// results.csv + run_log.json + overlay figures + all aggregate outputs.
void write_outputs(const ingest::TrialManifest& manifest, const RunResult& result,
                   const RunOptions& options = {});

// Summary tables (overall + per-activity per metric), metric bar charts and
// the normalized summary figure. Shared by cmd_run and cmd_report so reruns
// from a records CSV are byte-identical.
void emit_aggregate_outputs(std::span<const metrics::MetricsRecord> records,
                            metrics::StdFlavor std_flavor,
                            const std::filesystem::path& output_dir);

// CLI entry points; return process exit codes.
int cmd_run(const std::filesystem::path& manifest_path, const RunOptions& options);
int cmd_report(const std::filesystem::path& records_csv, const std::filesystem::path& output_dir,
               metrics::StdFlavor std_flavor = metrics::StdFlavor::population);

} // namespace kinebench::runner
