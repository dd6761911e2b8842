#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "kinebench/types.hpp"

// Synthetic skeletons with closed-form joint angles plus corruption operators
// (noise, dropout, lag). These are the independent oracles for every pipeline
// stage: a synth pose fed through the angle computation reproduces the
// analytic angle to 1e-9 degrees.

namespace kinebench::testkit {

enum class Motion { sinusoid_knee, sinusoid_elbow, constant_pose };

struct SynthSpec {
    Motion motion = Motion::sinusoid_knee;
    double amplitude_deg = 30.0;  // in (0, 90]
    double frequency_hz = 0.5;
    double duration_s = 10.0;
    double rate_hz = 30.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthResult {
    PoseSequence pose;
    AngleSeries analytic;    // theta*(t) = 90 + amplitude * sin(2*pi*f*t)
    std::string angle_name;  // the shipped angle definition the hinge drives
    std::string activity_id; // an activity that evaluates that angle
};

// Planar hinge construction: the two bone vectors of the target angle are
// placed so their angle equals theta*(t) exactly; the remaining canonical
// joints sit at fixed plausible offsets.
SynthResult synth_pose(const SynthSpec& spec);

// Same hinge construction driven by an arbitrary angle trajectory in degrees.
// Invalid samples mark the hinge markers invalid in that frame.
PoseSequence pose_from_angles(const AngleSeries& angles, Motion motion);

struct CorruptionSpec {
    double noise_std_deg = 0.0; // additive Gaussian (angles: degrees; poses: length units)
    double dropout_prob = 0.0;  // per sample, in [0, 1)
    int lag_samples = 0;        // |lag| <= 15; content shifted later for positive lag
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic given the seed: mt19937_64 driving an explicit Box-Muller
// transform, so fixtures are identical across platforms. Lag replicates the
// edge sample and trims so length is preserved; dropout marks samples invalid.
AngleSeries corrupt(const AngleSeries& series, const CorruptionSpec& spec);
PoseSequence corrupt(const PoseSequence& seq, const CorruptionSpec& spec);

// Deterministic Gaussian source used by corrupt(); exposed for tests. The
// engine is mt19937_64 (bit-exact by the standard) and the normal transform
// is spelled out here rather than taken from std::normal_distribution, whose
// output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform01(); // [0, 1)
    double gaussian();  // standard normal via Box-Muller
private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct FixtureTrialSpec {
    std::string model_name;
    CorruptionSpec corruption;
};

struct FixtureSpec {
    SynthSpec synth;
    std::vector<FixtureTrialSpec> trials;
    std::string subject_id = "S01";
    double imu_rate_hz = 50.0;
};

// clean, noisy (sigma 0.5 deg), lagged (7 samples), noisy+lagged.
FixtureSpec standard_bundle();

// Writes one pose CSV per trial, a 50 Hz .mot with the analytic angle, and a
// manifest wiring them into runnable trials. Returns the manifest path. The
// .mot emitter here is a separate code path from the ingest parser, so
// round-trip tests are meaningful.
std::filesystem::path emit_fixture(const FixtureSpec& spec, const std::filesystem::path& dir);

// Minimal .mot writer (time column + one angle column, inDegrees=yes).
std::string render_mot(const std::string& column_name, const std::vector<double>& values_deg,
                       double rate_hz);

} // namespace kinebench::testkit
