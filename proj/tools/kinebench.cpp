// kinebench: benchmark monocular-video 3D pose estimates against IMU-derived
// joint angles. Subcommands: convert, angles, run, report, synth.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kinebench/error.hpp"
#include "kinebench/ingest.hpp"
#include "kinebench/kinematics.hpp"
#include "kinebench/metrics.hpp"
#include "kinebench/numio.hpp"
#include "kinebench/runner.hpp"
#include "kinebench/testkit.hpp"

namespace kb = kinebench;

namespace {

int do_convert(const std::string& kind_name, const std::string& input, const std::string& output,
               const std::optional<std::string>& map_path) {
    auto kind = kb::ingest::parse_model_kind(kind_name);
    if (!kind) {
        std::cerr << "error: unknown model kind: " << kind_name
                  << " (expected h36m17_generic or bodytrack34)\n";
        return 1;
    }
    std::optional<std::filesystem::path> map;
    if (map_path) map = *map_path;
    kb::ingest::convert_model_output(input, *kind, output, map);
    std::cout << "wrote " << output << '\n';
    return 0;
}

int do_angles(const std::string& pose_csv, const std::string& activity, double rate_hz,
              const std::optional<std::string>& angle_config, const std::string& output) {
    std::vector<kb::kinematics::AngleDefinition> defs;
    kb::kinematics::ActivityAngleMap activity_map;
    if (angle_config) {
        std::ifstream in(*angle_config);
        if (!in) throw kb::IoError("cannot open angle config: " + *angle_config);
        std::ostringstream buf;
        buf << in.rdbuf();
        const auto config = kb::kinematics::parse_angle_config(buf.str());
        defs = kb::kinematics::merged_definitions(config);
        activity_map = kb::kinematics::merged_activity_map(config);
    } else {
        defs = kb::kinematics::builtin_angle_definitions();
        activity_map = kb::kinematics::builtin_activity_angle_map();
    }
    const auto& angle_name = activity_map.angle_for(activity);
    const auto& def = kb::kinematics::find_angle_definition(angle_name, defs);

    const auto pose = kb::ingest::read_pose_csv(pose_csv, rate_hz);
    const auto series = kb::kinematics::joint_angle(pose, def);
    const auto timed = kb::kinematics::frames_to_time(series);

    std::ofstream out(output, std::ios::binary);
    if (!out) throw kb::IoError("cannot write " + output);
    out << "time_s,angle_deg\n";
    for (std::size_t i = 0; i < timed.time_s.size(); ++i) {
        out << kb::num::format_double(timed.time_s[i]) << ',';
        if (timed.valid[i]) out << kb::num::format_double(timed.value_deg[i]);
        out << '\n';
    }
    std::cout << "wrote " << output << " (" << timed.time_s.size() << " samples, " << angle_name
              << ")\n";
    return 0;
}

int do_synth(const std::string& out_dir, bool standard_bundle, const std::string& motion_name,
             double amplitude, double frequency, double duration, double rate,
             std::uint64_t seed, double noise_std, double dropout, int lag) {
    kb::testkit::FixtureSpec spec;
    if (standard_bundle) {
        spec = kb::testkit::standard_bundle();
    } else {
        if (motion_name == "sinusoid_knee")
            spec.synth.motion = kb::testkit::Motion::sinusoid_knee;
        else if (motion_name == "sinusoid_elbow")
            spec.synth.motion = kb::testkit::Motion::sinusoid_elbow;
        else if (motion_name == "constant_pose")
            spec.synth.motion = kb::testkit::Motion::constant_pose;
        else {
            std::cerr << "error: unknown motion: " << motion_name << '\n';
            return 1;
        }
        spec.synth.amplitude_deg = amplitude;
        spec.synth.frequency_hz = frequency;
        spec.synth.duration_s = duration;
        spec.synth.rate_hz = rate;
        spec.synth.seed = seed;
        kb::testkit::CorruptionSpec corruption{noise_std, dropout, lag, seed};
        spec.trials = {{"synthetic", corruption}};
    }
    const auto manifest = kb::testkit::emit_fixture(spec, out_dir);
    std::cout << "wrote fixture: " << manifest.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark video-derived joint angles against IMU references"};
    app.set_version_flag("--version", std::string(kb::runner::kToolVersion));
    app.require_subcommand(1);

    bool verbose = false;
    app.add_flag("--verbose", verbose, "per-trial progress on stdout");

    // convert
    auto* convert = app.add_subcommand("convert", "rewrite a model export as canonical pose CSV");
    std::string convert_kind, convert_in, convert_out;
    std::optional<std::string> convert_map;
    convert->add_option("--kind", convert_kind, "h36m17_generic or bodytrack34")->required();
    convert->add_option("--map", convert_map, "harmonization map file overriding the builtin");
    convert->add_option("input", convert_in, "model CSV export")->required();
    convert->add_option("output", convert_out, "canonical pose CSV to write")->required();

    // angles
    auto* angles = app.add_subcommand("angles", "compute the activity's joint angle, unfiltered");
    std::string angles_pose, angles_activity, angles_out;
    double angles_rate = 30.0;
    std::optional<std::string> angles_config;
    angles->add_option("pose_csv", angles_pose, "canonical pose CSV")->required();
    angles->add_option("--activity", angles_activity, "activity id (A01..A13)")->required();
    angles->add_option("--rate", angles_rate, "frame rate in Hz (default 30)");
    angles->add_option("--angle-config", angles_config, "angle/activity override config");
    angles->add_option("output", angles_out, "two-column CSV (time_s, angle_deg)")->required();

    // run
    auto* run = app.add_subcommand("run", "execute a benchmark manifest end to end");
    std::string run_manifest;
    int run_jobs = 1;
    std::optional<std::string> run_output_dir, run_angle_config;
    run->add_option("manifest", run_manifest, "manifest JSON")->required();
    run->add_option("--jobs", run_jobs, "parallel trials (default 1)");
    run->add_option("--output-dir", run_output_dir, "override the manifest's output_dir");
    run->add_option("--angle-config", run_angle_config, "angle/activity override config");

    // report
    auto* report = app.add_subcommand("report", "regenerate aggregate outputs from results.csv");
    std::string report_records, report_out;
    bool report_sample_std = false;
    report->add_option("records_csv", report_records, "results.csv from a prior run")->required();
    report->add_option("--output-dir", report_out, "directory for tables and figures")->required();
    report->add_flag("--sample-std", report_sample_std, "sample (N-1) standard deviation");

    // synth
    auto* synth = app.add_subcommand("synth", "emit a synthetic fixture with known ground truth");
    std::string synth_out, synth_motion = "sinusoid_knee";
    bool synth_standard = false;
    double synth_amp = 30.0, synth_freq = 0.5, synth_dur = 10.0, synth_rate = 30.0;
    double synth_noise = 0.0, synth_dropout = 0.0;
    int synth_lag = 0;
    std::uint64_t synth_seed = 0;
    synth->add_option("--out", synth_out, "fixture directory")->required();
    synth->add_flag("--standard-bundle", synth_standard,
                    "4-trial bundle: clean, noisy, lagged, noisy+lagged");
    synth->add_option("--motion", synth_motion, "sinusoid_knee | sinusoid_elbow | constant_pose");
    synth->add_option("--amplitude-deg", synth_amp, "hinge amplitude (0, 90]");
    synth->add_option("--frequency-hz", synth_freq, "hinge frequency");
    synth->add_option("--duration-s", synth_dur, "recording length");
    synth->add_option("--rate-hz", synth_rate, "video frame rate");
    synth->add_option("--seed", synth_seed, "rng seed");
    synth->add_option("--noise-std-deg", synth_noise, "additive Gaussian std on the angle");
    synth->add_option("--dropout-prob", synth_dropout, "per-sample dropout probability [0, 1)");
    synth->add_option("--lag-samples", synth_lag, "shift content by this many samples, |lag|<=15");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*convert) return do_convert(convert_kind, convert_in, convert_out, convert_map);
        if (*angles)
            return do_angles(angles_pose, angles_activity, angles_rate, angles_config, angles_out);
        if (*run) {
            kb::runner::RunOptions options;
            options.jobs = run_jobs;
            options.verbose = verbose;
            if (run_output_dir) options.output_dir_override = *run_output_dir;
            if (run_angle_config) options.angle_config_path = *run_angle_config;
            return kb::runner::cmd_run(run_manifest, options);
        }
        if (*report)
            return kb::runner::cmd_report(report_records, report_out,
                                          report_sample_std ? kb::metrics::StdFlavor::sample
                                                            : kb::metrics::StdFlavor::population);
        if (*synth)
            return do_synth(synth_out, synth_standard, synth_motion, synth_amp, synth_freq,
                            synth_dur, synth_rate, synth_seed, synth_noise, synth_dropout,
                            synth_lag);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
