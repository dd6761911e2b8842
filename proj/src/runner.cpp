#include "kinebench/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kinebench/dsp.hpp"
#include "kinebench/error.hpp"
#include "kinebench/numio.hpp"
#include "kinebench/report.hpp"
#include "kinebench/skeleton.hpp"

namespace kinebench::runner {

std::size_t RunResult::ok_count() const {
    std::size_t n = 0;
    for (const auto& o : outcomes)
        if (o.status == TrialOutcome::Status::ok) ++n;
    return n;
}

namespace {

AngleSeries condition_video(const AngleSeries& raw, const dsp::FilterConfig& cfg) {
    auto s = dsp::interpolate_gaps(raw);
    s = dsp::median_filter(s, cfg.median_window);
    s = dsp::moving_average(s, cfg.mavg_window);
    return dsp::mean_remove(s);
}

AngleSeries condition_imu(const AngleSeries& raw, const dsp::FilterConfig& cfg) {
    auto s = dsp::interpolate_gaps(raw);
    s = dsp::resample(s, cfg.target_rate_hz);
    s = dsp::median_filter(s, cfg.median_window);
    s = dsp::moving_average(s, cfg.mavg_window);
    return dsp::mean_remove(s);
}

} // namespace

TrialOutcome run_trial(const ingest::TrialSpec& trial, const dsp::FilterConfig& filter_config,
                       const align::AlignmentConfig& alignment_config,
                       std::span<const kinematics::AngleDefinition> definitions,
                       const kinematics::ActivityAngleMap& activity_map) {
    TrialOutcome outcome;
    const auto started = std::chrono::steady_clock::now();
    try {
        const auto& angle_name = activity_map.angle_for(trial.activity_id);
        const auto& def = kinematics::find_angle_definition(angle_name, definitions);
        const std::vector<std::string> required{def.m1, def.m2, def.m3, def.m4};

        // video branch
        PoseSequence pose = ingest::read_pose_csv(trial.pose_file_path, trial.video_rate_hz);
        const auto map = trial.harmonization_map_path
                             ? skeleton::restrict_to_sources(
                                   skeleton::load_map(*trial.harmonization_map_path), pose.joint_set)
                             : skeleton::name_matching_map(pose.joint_set);
        pose = skeleton::harmonize(pose, map, required);
        AngleSeries video = kinematics::joint_angle(pose, def);
        video.provenance = Provenance::video(trial.model_name);
        video = condition_video(video, filter_config);

        // imu branch
        const auto mot = ingest::read_mot(trial.imu_file_path);
        AngleSeries imu = ingest::extract_imu_angle(mot, trial.imu_column_name, trial.imu_rate_hz);
        imu = condition_imu(imu, filter_config);

        const auto alignment = align::best_offset(imu, video, alignment_config);
        auto [ref, est] = align::apply_offset_and_trim(imu, video, alignment.offset);

        auto record = metrics::evaluate_trial(
            ref, est, {trial.subject_id, trial.activity_id, trial.model_name});
        record.offset = alignment.offset;
        record.fit_rmse = alignment.fit_rmse;

        outcome.status = TrialOutcome::Status::ok;
        outcome.record = std::move(record);
        outcome.aligned_ref = std::move(ref);
        outcome.aligned_est = std::move(est);
    } catch (const std::exception& e) {
        outcome.status = TrialOutcome::Status::failed;
        outcome.reason = e.what();
    }
    outcome.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return outcome;
}

RunResult run_manifest(const ingest::TrialManifest& manifest, const RunOptions& options) {
    RunResult result;
    result.output_dir =
        options.output_dir_override ? *options.output_dir_override : manifest.output_dir;
    result.outcomes.resize(manifest.trials.size());

    std::vector<kinematics::AngleDefinition> definitions;
    kinematics::ActivityAngleMap activity_map;
    if (options.angle_config_path) {
        std::ifstream in(*options.angle_config_path);
        if (!in) throw IoError("cannot open angle config: " + options.angle_config_path->string());
        std::ostringstream buf;
        buf << in.rdbuf();
        const auto config = kinematics::parse_angle_config(buf.str());
        definitions = kinematics::merged_definitions(config);
        activity_map = kinematics::merged_activity_map(config);
    } else {
        definitions = kinematics::builtin_angle_definitions();
        activity_map = kinematics::builtin_activity_angle_map();
    }

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || manifest.trials.size() < 2) {
        for (std::size_t i = 0; i < manifest.trials.size(); ++i)
            result.outcomes[i] = run_trial(manifest.trials[i], manifest.filter_config,
                                           manifest.alignment_config, definitions, activity_map);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= manifest.trials.size()) break;
                result.outcomes[i] = run_trial(manifest.trials[i], manifest.filter_config,
                                               manifest.alignment_config, definitions, activity_map);
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(jobs, static_cast<int>(manifest.trials.size()));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& outcome : result.outcomes)
        if (outcome.record) result.records.push_back(*outcome.record);
    return result;
}

namespace {

std::string sanitize_filename(std::string_view s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

void write_run_log(const ingest::TrialManifest& manifest, const RunResult& result,
                   const RunOptions& options) {
    nlohmann::json log;
    log["tool_version"] = std::string(kToolVersion);
    log["jobs"] = options.jobs;
    log["config"] = nlohmann::json::parse(ingest::serialize_manifest(manifest));
    auto trials = nlohmann::json::array();
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        const auto& t = manifest.trials[i];
        const auto& o = result.outcomes[i];
        const char* status = o.status == TrialOutcome::Status::ok        ? "ok"
                             : o.status == TrialOutcome::Status::skipped ? "skipped"
                                                                         : "failed";
        nlohmann::json jt = {{"subject_id", t.subject_id},
                             {"activity_id", t.activity_id},
                             {"model", t.model_name},
                             {"status", status},
                             {"elapsed_ms", o.elapsed_ms}};
        if (!o.reason.empty()) jt["reason"] = o.reason;
        trials.push_back(std::move(jt));
    }
    log["trials"] = std::move(trials);
    log["n_trials"] = result.outcomes.size();
    log["n_ok"] = result.ok_count();

    std::ofstream out(result.output_dir / "run_log.json", std::ios::binary);
    if (!out) throw IoError("cannot write run log");
    out << log.dump(2) << '\n';
}

void emit_overlays(const ingest::TrialManifest& manifest, const RunResult& result) {
    // group successful trials by (activity, subject) and co-register all
    // aligned pairs on the reference's sample axis: a trial's trimmed ref
    // starts at imu index max(0, -offset)
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
        if (result.outcomes[i].status != TrialOutcome::Status::ok) continue;
        const auto& t = manifest.trials[i];
        groups[{t.activity_id, t.subject_id}].push_back(i);
    }
    for (const auto& [key, indices] : groups) {
        const auto& [activity, subject] = key;
        auto ref_start = [&](std::size_t i) {
            return static_cast<std::size_t>(std::max(0, -*result.outcomes[i].record->offset));
        };
        std::size_t start = 0;
        std::size_t end = std::numeric_limits<std::size_t>::max();
        for (auto i : indices) {
            start = std::max(start, ref_start(i));
            end = std::min(end, ref_start(i) + result.outcomes[i].aligned_ref->size());
        }
        if (end < start + 2) continue;
        const std::size_t common = end - start;

        auto window = [&](const AngleSeries& s, std::size_t from) {
            AngleSeries out = s;
            out.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(from),
                              s.values.begin() + static_cast<std::ptrdiff_t>(from + common));
            out.valid.assign(s.valid.begin() + static_cast<std::ptrdiff_t>(from),
                             s.valid.begin() + static_cast<std::ptrdiff_t>(from + common));
            return out;
        };
        const std::size_t front = indices.front();
        const AngleSeries ref =
            window(*result.outcomes[front].aligned_ref, start - ref_start(front));
        std::vector<std::pair<std::string, AngleSeries>> estimates;
        for (auto i : indices)
            estimates.emplace_back(manifest.trials[i].model_name,
                                   window(*result.outcomes[i].aligned_est, start - ref_start(i)));

        report::PlotSpec spec;
        spec.kind = report::PlotSpec::Kind::overlay;
        spec.title = activity + " (" + std::string(kinematics::activity_legend(activity)) + "), " +
                     subject + ": " + ref.label;
        spec.x_label = "time [s]";
        spec.y_label = "angle [deg], mean removed";
        report::plot_overlay(ref, estimates, spec,
                             result.output_dir / ("overlay_" + sanitize_filename(activity) + "_" +
                                                  sanitize_filename(subject) + ".svg"));
    }
}

} // namespace

void emit_aggregate_outputs(std::span<const metrics::MetricsRecord> records,
                            metrics::StdFlavor std_flavor,
                            const std::filesystem::path& output_dir) {
    if (records.empty()) throw EmptyInput();
    std::filesystem::create_directories(output_dir);

    const auto overall = metrics::aggregate(records, metrics::Grouping::overall_per_model,
                                            std_flavor);
    report::write_summary_table(overall, report::TableFormat::csv,
                                output_dir / "summary_overall.csv");
    report::write_summary_table(overall, report::TableFormat::markdown,
                                output_dir / "summary_overall.md");

    const auto by_activity =
        metrics::aggregate(records, metrics::Grouping::per_activity_per_model, std_flavor);
    for (metrics::Metric m : metrics::kAllMetrics) {
        const std::string base = "summary_per_activity_" + std::string(metrics::metric_name(m));
        report::write_summary_table(by_activity, report::TableFormat::csv,
                                    output_dir / (base + ".csv"), m);
        report::write_summary_table(by_activity, report::TableFormat::markdown,
                                    output_dir / (base + ".md"), m);
    }

    if (overall.models.size() >= 2) {
        report::PlotSpec spec;
        spec.kind = report::PlotSpec::Kind::summary_bars;
        spec.title = "normalized evaluation metrics (min-max across models)";
        spec.y_label = "normalized value";
        report::normalized_summary_bars(overall, spec, output_dir / "summary_normalized.svg");
    }

    // per-activity grouped bar charts, one per metric
    std::set<std::string> activities;
    for (const auto& r : records) activities.insert(r.activity_id);
    for (const auto& activity : activities) {
        std::vector<metrics::MetricsRecord> subset;
        for (const auto& r : records)
            if (r.activity_id == activity) subset.push_back(r);
        for (metrics::Metric m : metrics::kAllMetrics) {
            report::PlotSpec spec;
            spec.kind = report::PlotSpec::Kind::metric_bars;
            spec.title = activity + " (" + std::string(kinematics::activity_legend(activity)) +
                         "): " + std::string(metrics::metric_title(m)) + " per subject";
            spec.y_label = std::string(metrics::metric_title(m));
            spec.x_label = "subject";
            report::plot_metric_bars(subset, m, spec,
                                     output_dir / (sanitize_filename(activity) + "_" +
                                                   std::string(metrics::metric_name(m)) + ".svg"));
        }
    }
}

void write_outputs(const ingest::TrialManifest& manifest, const RunResult& result,
                   const RunOptions& options) {
    std::filesystem::create_directories(result.output_dir);
    metrics::write_records_csv(result.records, result.output_dir / "results.csv");
    write_run_log(manifest, result, options);
    if (!result.records.empty()) {
        std::vector<metrics::MetricsRecord> records = result.records;
        emit_aggregate_outputs(records, manifest.std_flavor, result.output_dir);
        emit_overlays(manifest, result);
    }
}

int cmd_run(const std::filesystem::path& manifest_path, const RunOptions& options) {
    try {
        const auto manifest = ingest::load_manifest(manifest_path);
        if (manifest.trials.empty()) {
            std::cerr << "error: manifest contains no trials\n";
            return 1;
        }
        const auto result = run_manifest(manifest, options);
        write_outputs(manifest, result, options);

        for (std::size_t i = 0; i < result.outcomes.size(); ++i) {
            const auto& o = result.outcomes[i];
            const auto& t = manifest.trials[i];
            if (o.status != TrialOutcome::Status::ok)
                std::cerr << "warning: trial " << t.subject_id << '/' << t.activity_id << '/'
                          << t.model_name << " failed: " << o.reason << '\n';
            else if (options.verbose)
                std::cout << "ok: " << t.subject_id << '/' << t.activity_id << '/' << t.model_name
                          << " offset=" << *o.record->offset << " rmse="
                          << num::format_double(o.record->rmse) << '\n';
        }
        if (result.ok_count() == 0) {
            std::cerr << "error: no trial succeeded\n";
            return 1;
        }
        std::cout << result.ok_count() << '/' << result.outcomes.size() << " trials ok; outputs in "
                  << result.output_dir.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_report(const std::filesystem::path& records_csv, const std::filesystem::path& output_dir,
               metrics::StdFlavor std_flavor) {
    try {
        const auto records = metrics::read_records_csv(records_csv);
        if (records.empty()) {
            std::cerr << "error: records CSV has no rows\n";
            return 1;
        }
        emit_aggregate_outputs(records, std_flavor, output_dir);
        std::cout << "aggregated " << records.size() << " records; outputs in "
                  << output_dir.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace kinebench::runner
