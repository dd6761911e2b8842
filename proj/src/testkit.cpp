#include "kinebench/testkit.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "kinebench/error.hpp"
#include "kinebench/ingest.hpp"
#include "kinebench/kinematics.hpp"
#include "kinebench/numio.hpp"
#include "kinebench/skeleton.hpp"

namespace kinebench::testkit {

void SynthSpec::validate() const {
    if (!(amplitude_deg > 0.0) || amplitude_deg > 90.0)
        throw Error("synth spec: amplitude must be in (0, 90]");
    if (!(frequency_hz > 0.0)) throw Error("synth spec: frequency must be > 0");
    if (!(duration_s > 0.0)) throw Error("synth spec: duration must be > 0");
    if (!(rate_hz > 0.0)) throw Error("synth spec: rate must be > 0");
}

void CorruptionSpec::validate() const {
    if (noise_std_deg < 0.0) throw Error("corruption spec: noise std must be >= 0");
    if (dropout_prob < 0.0 || dropout_prob >= 1.0)
        throw Error("corruption spec: dropout probability must be in [0, 1)");
    if (lag_samples < -15 || lag_samples > 15)
        throw Error("corruption spec: |lag| must be <= 15 samples");
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

namespace {

struct Hinge {
    std::string angle_name;
    std::string activity_id;
    // m2 of the angle definition is the pivot: v1 = pivot - root,
    // v2 = tip - pivot for elbow/knee style rows
    std::string root, pivot, tip;
};

Hinge hinge_for(Motion motion) {
    switch (motion) {
        case Motion::sinusoid_knee:
            return {"knee_angle_l", "A01", "left_hip", "left_knee", "left_ankle"};
        case Motion::sinusoid_elbow:
            return {"elbow_flex_r", "A05", "right_shoulder", "right_elbow", "right_wrist"};
        case Motion::constant_pose:
            return {"knee_angle_l", "A01", "left_hip", "left_knee", "left_ankle"};
    }
    throw Error("unhandled motion");
}

// A static, roughly human-shaped placement for every canonical joint. The
// hinge joints get overwritten per frame.
Vec3 rest_position(std::string_view joint) {
    if (joint == "pelvis") return {0.0, 1.0, 0.0};
    if (joint == "right_hip") return {-0.12, 1.0, 0.0};
    if (joint == "right_knee") return {-0.12, 0.55, 0.0};
    if (joint == "right_ankle") return {-0.12, 0.1, 0.0};
    if (joint == "left_hip") return {0.12, 1.0, 0.0};
    if (joint == "left_knee") return {0.12, 0.55, 0.0};
    if (joint == "left_ankle") return {0.12, 0.1, 0.0};
    if (joint == "torso") return {0.0, 1.25, 0.0};
    if (joint == "neck") return {0.0, 1.5, 0.0};
    if (joint == "head") return {0.0, 1.62, 0.0};
    if (joint == "head_top") return {0.0, 1.75, 0.0};
    if (joint == "left_shoulder") return {0.2, 1.45, 0.0};
    if (joint == "left_elbow") return {0.45, 1.45, 0.0};
    if (joint == "left_wrist") return {0.7, 1.45, 0.0};
    if (joint == "right_shoulder") return {-0.2, 1.45, 0.0};
    if (joint == "right_elbow") return {-0.45, 1.45, 0.0};
    if (joint == "right_wrist") return {-0.7, 1.45, 0.0};
    throw Error("no rest position for joint: " + std::string(joint));
}

} // namespace

PoseSequence pose_from_angles(const AngleSeries& angles, Motion motion) {
    const Hinge hinge = hinge_for(motion);
    const auto& canon = skeleton::canonical_joint_set();
    PoseSequence seq = PoseSequence::make(canon, angles.size(), angles.sample_rate_hz);

    const std::size_t i_root = *canon.index_of(hinge.root);
    const std::size_t i_pivot = *canon.index_of(hinge.pivot);
    const std::size_t i_tip = *canon.index_of(hinge.tip);

    for (std::size_t j = 0; j < canon.size(); ++j) {
        const Vec3 rest = rest_position(canon.names[j]);
        for (std::size_t f = 0; f < angles.size(); ++f) seq.at(f, j) = rest;
    }

    // Hinge in the xy-plane at the pivot: the proximal bone points down the
    // -y axis from root to pivot, and the distal bone leaves the pivot at the
    // target angle from the proximal direction.
    constexpr double deg_to_rad = std::numbers::pi / 180.0;
    const Vec3 pivot_pos = rest_position(hinge.pivot);
    const double bone_len = 0.45;
    for (std::size_t f = 0; f < angles.size(); ++f) {
        seq.at(f, i_root) = pivot_pos + Vec3{0.0, bone_len, 0.0};
        seq.at(f, i_pivot) = pivot_pos;
        const double phi = angles.values[f] * deg_to_rad;
        // proximal direction is (0,-1,0); rotate it by phi about +z
        seq.at(f, i_tip) = pivot_pos + bone_len * Vec3{std::sin(phi), -std::cos(phi), 0.0};
        if (!angles.valid[f]) {
            seq.set_valid(f, i_root, false);
            seq.set_valid(f, i_pivot, false);
            seq.set_valid(f, i_tip, false);
        }
    }
    return seq;
}

SynthResult synth_pose(const SynthSpec& spec) {
    spec.validate();
    const Hinge hinge = hinge_for(spec.motion);
    const std::size_t n = static_cast<std::size_t>(std::floor(spec.duration_s * spec.rate_hz)) + 1;

    AngleSeries analytic;
    analytic.sample_rate_hz = spec.rate_hz;
    analytic.label = hinge.angle_name;
    analytic.values.resize(n);
    analytic.valid.assign(n, 1);
    const double amp = spec.motion == Motion::constant_pose ? 0.0 : spec.amplitude_deg;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.rate_hz;
        analytic.values[i] = 90.0 + amp * std::sin(2.0 * std::numbers::pi * spec.frequency_hz * t);
    }

    SynthResult result;
    result.pose = pose_from_angles(analytic, spec.motion);
    result.analytic = std::move(analytic);
    result.angle_name = hinge.angle_name;
    result.activity_id = hinge.activity_id;
    return result;
}

AngleSeries corrupt(const AngleSeries& series, const CorruptionSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    AngleSeries out = series;
    const std::size_t n = out.size();

    // lag first: shift content later (positive) or earlier (negative),
    // replicating the edge sample to preserve length
    if (spec.lag_samples != 0 && n > 0) {
        std::vector<double> shifted(n);
        std::vector<std::uint8_t> shifted_valid(n);
        const int k = spec.lag_samples;
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i) - k, 0,
                                                      static_cast<std::ptrdiff_t>(n) - 1);
            shifted[i] = out.values[static_cast<std::size_t>(j)];
            shifted_valid[i] = out.valid[static_cast<std::size_t>(j)];
        }
        out.values = std::move(shifted);
        out.valid = std::move(shifted_valid);
    }
    if (spec.noise_std_deg > 0.0) {
        for (auto& v : out.values) v += spec.noise_std_deg * rng.gaussian();
    }
    if (spec.dropout_prob > 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform01() < spec.dropout_prob) out.valid[i] = 0;
    }
    return out;
}

PoseSequence corrupt(const PoseSequence& seq, const CorruptionSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    PoseSequence out = seq;
    const std::size_t frames = out.frame_count();
    const std::size_t joints = out.joint_set.size();

    if (spec.lag_samples != 0 && frames > 0) {
        PoseSequence shifted = out;
        const int k = spec.lag_samples;
        for (std::size_t f = 0; f < frames; ++f) {
            const auto src = static_cast<std::size_t>(
                std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(f) - k, 0,
                                           static_cast<std::ptrdiff_t>(frames) - 1));
            for (std::size_t j = 0; j < joints; ++j) {
                shifted.at(f, j) = out.at(src, j);
                shifted.valid[f * joints + j] = out.valid[src * joints + j];
            }
        }
        out = std::move(shifted);
    }
    if (spec.noise_std_deg > 0.0) {
        for (auto& p : out.coords) {
            p.x += spec.noise_std_deg * rng.gaussian();
            p.y += spec.noise_std_deg * rng.gaussian();
            p.z += spec.noise_std_deg * rng.gaussian();
        }
    }
    if (spec.dropout_prob > 0.0) {
        for (std::size_t f = 0; f < frames; ++f)
            if (rng.uniform01() < spec.dropout_prob)
                for (std::size_t j = 0; j < joints; ++j) out.valid[f * joints + j] = 0;
    }
    return out;
}

FixtureSpec standard_bundle() {
    FixtureSpec spec;
    spec.synth = SynthSpec{};
    spec.trials = {
        {"clean", {}},
        {"noisy", {0.5, 0.0, 0, 11}},
        {"lagged", {0.0, 0.0, 7, 12}},
        {"noisy_lagged", {0.5, 0.0, 7, 13}},
    };
    return spec;
}

std::string render_mot(const std::string& column_name, const std::vector<double>& values_deg,
                       double rate_hz) {
    std::ostringstream os;
    os << "synthetic_imu_angles\n"
       << "version=1\n"
       << "nRows=" << values_deg.size() << '\n'
       << "nColumns=2\n"
       << "inDegrees=yes\n"
       << "endheader\n"
       << "time\t" << column_name << '\n';
    for (std::size_t i = 0; i < values_deg.size(); ++i) {
        os << num::format_double(static_cast<double>(i) / rate_hz) << '\t'
           << num::format_double(values_deg[i]) << '\n';
    }
    return os.str();
}

std::filesystem::path emit_fixture(const FixtureSpec& spec, const std::filesystem::path& dir) {
    spec.synth.validate();
    std::filesystem::create_directories(dir);

    // IMU branch: analytic angle sampled at the IMU rate
    SynthSpec imu_synth = spec.synth;
    imu_synth.rate_hz = spec.imu_rate_hz;
    const SynthResult imu = synth_pose(imu_synth);
    const auto mot_path = dir / "imu_angles.mot";
    {
        std::ofstream out(mot_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + mot_path.string());
        out << render_mot(imu.angle_name, imu.analytic.values, spec.imu_rate_hz);
    }

    // video branch: per-trial corrupted angle driving a synthetic pose.
    // Serialized paths stay relative so the fixture is self-contained.
    const SynthResult video = synth_pose(spec.synth);
    ingest::TrialManifest manifest;
    manifest.output_dir = "out";
    for (const auto& trial : spec.trials) {
        const AngleSeries corrupted = corrupt(video.analytic, trial.corruption);
        const PoseSequence pose = pose_from_angles(corrupted, spec.synth.motion);
        const std::string pose_name = "pose_" + trial.model_name + ".csv";
        ingest::write_pose_csv(pose, dir / pose_name);

        ingest::TrialSpec ts;
        ts.subject_id = spec.subject_id;
        ts.activity_id = video.activity_id;
        ts.model_name = trial.model_name;
        ts.pose_file_path = pose_name;
        ts.imu_file_path = "imu_angles.mot";
        ts.imu_column_name = video.angle_name;
        ts.video_rate_hz = spec.synth.rate_hz;
        ts.imu_rate_hz = spec.imu_rate_hz;
        manifest.trials.push_back(std::move(ts));
    }

    const auto manifest_path = dir / "manifest.json";
    {
        std::ofstream out(manifest_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + manifest_path.string());
        out << ingest::serialize_manifest(manifest);
    }
    return manifest_path;
}

} // namespace kinebench::testkit
