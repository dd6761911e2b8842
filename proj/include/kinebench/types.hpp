#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kinebench {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// An ordered set of joint names. Order matters: it fixes column layout in CSV
// files and the index layout of PoseSequence frames.
struct JointSet {
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }
    bool contains(std::string_view name) const { return index_of(name).has_value(); }
    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        return std::nullopt;
    }
    friend bool operator==(const JointSet&, const JointSet&) = default;
};

// Per-frame 3D coordinates for a joint set at a fixed frame rate. Stored
// frame-major: coords[frame * joint_count + joint]. The validity mask marks
// per-frame, per-joint samples that downstream math must not consume without
// interpolation.
struct PoseSequence {
    JointSet joint_set;
    std::vector<Vec3> coords;
    std::vector<std::uint8_t> valid;
    double frame_rate_hz = 0.0;

    std::size_t frame_count() const {
        return joint_set.size() == 0 ? 0 : coords.size() / joint_set.size();
    }
    const Vec3& at(std::size_t frame, std::size_t joint) const {
        return coords[frame * joint_set.size() + joint];
    }
    Vec3& at(std::size_t frame, std::size_t joint) {
        return coords[frame * joint_set.size() + joint];
    }
    bool is_valid(std::size_t frame, std::size_t joint) const {
        return valid[frame * joint_set.size() + joint] != 0;
    }
    void set_valid(std::size_t frame, std::size_t joint, bool v) {
        valid[frame * joint_set.size() + joint] = v ? 1 : 0;
    }

    static PoseSequence make(JointSet set, std::size_t frames, double rate_hz) {
        PoseSequence seq;
        seq.joint_set = std::move(set);
        seq.coords.assign(frames * seq.joint_set.size(), Vec3{});
        seq.valid.assign(frames * seq.joint_set.size(), 1);
        seq.frame_rate_hz = rate_hz;
        return seq;
    }
};

enum class SourceKind { video_model, imu };

struct Provenance {
    SourceKind kind = SourceKind::video_model;
    std::string model; // empty for imu

    static Provenance video(std::string model_name) {
        return {SourceKind::video_model, std::move(model_name)};
    }
    static Provenance imu() { return {SourceKind::imu, {}}; }
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// A uniformly sampled joint-angle trajectory in degrees with a validity mask.
struct AngleSeries {
    std::vector<double> values;
    std::vector<std::uint8_t> valid;
    double sample_rate_hz = 0.0;
    std::string label;
    Provenance provenance;

    std::size_t size() const { return values.size(); }
    bool all_valid() const {
        for (auto v : valid)
            if (!v) return false;
        return true;
    }

    static AngleSeries make(std::vector<double> vals, double rate_hz,
                            std::string label_ = {}, Provenance prov = {}) {
        AngleSeries s;
        s.valid.assign(vals.size(), 1);
        s.values = std::move(vals);
        s.sample_rate_hz = rate_hz;
        s.label = std::move(label_);
        s.provenance = std::move(prov);
        return s;
    }
};

} // namespace kinebench
