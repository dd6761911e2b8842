#include "kinebench/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kinebench/error.hpp"
#include "kinebench/kinematics.hpp"
#include "kinebench/numio.hpp"
#include "kinebench/skeleton.hpp"

namespace kinebench::ingest {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

struct PoseHeader {
    bool has_frame_column = false;
    JointSet joints;                 // in file order
    std::vector<std::size_t> x_col;  // column index of <joint>_x per joint
};

PoseHeader parse_pose_header(std::string_view header_line) {
    auto cells = num::split(header_line, ',');
    PoseHeader h;
    std::size_t i = 0;
    if (!cells.empty() && num::trim(cells[0]) == "frame") {
        h.has_frame_column = true;
        i = 1;
    }
    if ((cells.size() - i) % 3 != 0 || cells.size() - i == 0)
        throw MalformedHeader("pose CSV header: expected frame column plus x/y/z triples, got " +
                              std::to_string(cells.size()) + " cells");
    for (; i < cells.size(); i += 3) {
        auto cx = num::trim(cells[i]);
        auto cy = num::trim(cells[i + 1]);
        auto cz = num::trim(cells[i + 2]);
        auto strip = [](std::string_view c, std::string_view suffix) -> std::optional<std::string_view> {
            if (c.size() > suffix.size() && c.substr(c.size() - suffix.size()) == suffix)
                return c.substr(0, c.size() - suffix.size());
            return std::nullopt;
        };
        auto jx = strip(cx, "_x");
        auto jy = strip(cy, "_y");
        auto jz = strip(cz, "_z");
        if (!jx || !jy || !jz || *jx != *jy || *jx != *jz)
            throw MalformedHeader("pose CSV header: expected <joint>_x,<joint>_y,<joint>_z at cell " +
                                  std::to_string(i + 1) + " ('" + std::string(cx) + "')");
        if (h.joints.contains(*jx))
            throw MalformedHeader("pose CSV header: duplicate joint '" + std::string(*jx) + "'");
        h.joints.names.emplace_back(*jx);
        h.x_col.push_back(i);
    }
    return h;
}

} // namespace

PoseSequence parse_pose_csv(std::string_view text, double frame_rate_hz,
                            const JointSet* expected) {
    auto lines = num::split_lines(text);
    if (lines.empty()) throw MalformedHeader("pose CSV: empty file");
    const PoseHeader header = parse_pose_header(lines[0]);
    if (expected) {
        for (const auto& name : expected->names)
            if (!header.joints.contains(name))
                throw MalformedHeader("pose CSV: expected joint missing from header: " + name);
    }

    const std::size_t joint_count = header.joints.size();
    const std::size_t cells_per_row = joint_count * 3 + (header.has_frame_column ? 1 : 0);

    PoseSequence seq;
    seq.joint_set = header.joints;
    seq.frame_rate_hz = frame_rate_hz;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (num::trim(lines[li]).empty()) continue;
        auto cells = num::split(lines[li], ',');
        if (cells.size() != cells_per_row)
            throw RaggedRow(li + 1, "expected " + std::to_string(cells_per_row) + " cells, got " +
                                        std::to_string(cells.size()));
        for (std::size_t j = 0; j < joint_count; ++j) {
            const std::size_t cx = header.x_col[j];
            auto vx = num::parse_double(num::trim(cells[cx]));
            auto vy = num::parse_double(num::trim(cells[cx + 1]));
            auto vz = num::parse_double(num::trim(cells[cx + 2]));
            const bool ok = vx && vy && vz && std::isfinite(*vx) && std::isfinite(*vy) &&
                            std::isfinite(*vz);
            seq.coords.push_back(ok ? Vec3{*vx, *vy, *vz} : Vec3{});
            seq.valid.push_back(ok ? 1 : 0);
        }
    }
    if (seq.coords.empty()) throw NoFrames();
    return seq;
}

PoseSequence read_pose_csv(const std::filesystem::path& path, double frame_rate_hz,
                           const JointSet* expected) {
    return parse_pose_csv(read_file(path), frame_rate_hz, expected);
}

std::string pose_to_csv(const PoseSequence& seq) {
    std::ostringstream os;
    os << "frame";
    for (const auto& j : seq.joint_set.names) os << ',' << j << "_x," << j << "_y," << j << "_z";
    os << '\n';
    const std::size_t frames = seq.frame_count();
    for (std::size_t f = 0; f < frames; ++f) {
        os << f;
        for (std::size_t j = 0; j < seq.joint_set.size(); ++j) {
            if (seq.is_valid(f, j)) {
                const Vec3& p = seq.at(f, j);
                os << ',' << num::format_double(p.x) << ',' << num::format_double(p.y) << ','
                   << num::format_double(p.z);
            } else {
                os << ",,,";
            }
        }
        os << '\n';
    }
    return os.str();
}

void write_pose_csv(const PoseSequence& seq, const std::filesystem::path& path) {
    write_file(path, pose_to_csv(seq));
}

std::optional<std::size_t> MotTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < column_names.size(); ++i)
        if (column_names[i] == name) return i;
    return std::nullopt;
}

MotTable parse_mot(std::string_view text) {
    auto lines = num::split_lines(text);
    MotTable table;
    std::optional<std::size_t> declared_rows;
    std::optional<std::size_t> declared_cols;

    std::size_t li = 0;
    bool saw_endheader = false;
    for (; li < lines.size(); ++li) {
        auto line = num::trim(lines[li]);
        if (line == "endheader") {
            saw_endheader = true;
            ++li;
            break;
        }
        auto eq = line.find('=');
        if (eq != std::string_view::npos) {
            auto key = num::trim(line.substr(0, eq));
            auto value = num::trim(line.substr(eq + 1));
            if (key == "inDegrees") {
                table.in_degrees = (value == "yes");
            } else if (key == "nRows") {
                if (auto v = num::parse_double(value)) declared_rows = static_cast<std::size_t>(*v);
            } else if (key == "nColumns") {
                if (auto v = num::parse_double(value)) declared_cols = static_cast<std::size_t>(*v);
            }
        }
    }
    if (!saw_endheader) throw MissingEndHeader();

    // column-name row: first non-blank line after the header
    while (li < lines.size() && num::trim(lines[li]).empty()) ++li;
    if (li >= lines.size()) throw ColumnCountMismatch("mot: missing column-name row");
    for (auto name : num::split_ws(lines[li])) table.column_names.emplace_back(name);
    if (table.column_names.empty()) throw ColumnCountMismatch("mot: empty column-name row");
    if (declared_cols && *declared_cols != table.column_names.size())
        throw ColumnCountMismatch("mot: header declares " + std::to_string(*declared_cols) +
                                  " columns, name row has " +
                                  std::to_string(table.column_names.size()));
    ++li;

    for (; li < lines.size(); ++li) {
        if (num::trim(lines[li]).empty()) continue;
        auto tokens = num::split_ws(lines[li]);
        if (tokens.size() != table.column_names.size())
            throw ColumnCountMismatch("mot line " + std::to_string(li + 1) + ": expected " +
                                      std::to_string(table.column_names.size()) + " values, got " +
                                      std::to_string(tokens.size()));
        std::vector<double> row(tokens.size());
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            auto v = num::parse_double(tokens[c]);
            if (!v) throw NonNumericCell(li + 1, c + 1, std::string(tokens[c]));
            row[c] = *v;
        }
        table.rows.push_back(std::move(row));
    }
    if (declared_rows && *declared_rows != table.rows.size())
        throw ColumnCountMismatch("mot: header declares " + std::to_string(*declared_rows) +
                                  " rows, found " + std::to_string(table.rows.size()));

    if (auto time_col = table.column_index("time")) {
        for (std::size_t r = 1; r < table.rows.size(); ++r)
            if (!(table.rows[r][*time_col] > table.rows[r - 1][*time_col]))
                throw Error("mot: time column not strictly increasing at row " +
                            std::to_string(r + 1));
    }
    return table;
}

MotTable read_mot(const std::filesystem::path& path) { return parse_mot(read_file(path)); }

AngleSeries extract_imu_angle(const MotTable& table, const std::string& column, double rate_hz) {
    auto col = table.column_index(column);
    if (!col) throw UnknownColumn(column);

    AngleSeries series;
    series.sample_rate_hz = rate_hz;
    series.label = column;
    series.provenance = Provenance::imu();
    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    for (const auto& row : table.rows) {
        const double raw = row[*col];
        if (std::isfinite(raw)) {
            series.values.push_back(table.in_degrees ? raw : raw * rad_to_deg);
            series.valid.push_back(1);
        } else {
            series.values.push_back(0.0);
            series.valid.push_back(0);
        }
    }
    return series;
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    if (name == "h36m17_generic") return ModelKind::h36m17_generic;
    if (name == "bodytrack34") return ModelKind::bodytrack34;
    return std::nullopt;
}

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::h36m17_generic: return "h36m17_generic";
        case ModelKind::bodytrack34: return "bodytrack34";
    }
    return {};
}

std::string convert_model_csv(std::string_view text, ModelKind kind,
                              const std::optional<std::filesystem::path>& map_path) {
    auto lines = num::split_lines(text);
    if (lines.empty()) throw MalformedHeader("pose CSV: empty file");
    const PoseHeader header = parse_pose_header(lines[0]);

    skeleton::HarmonizationMap map;
    if (map_path) {
        map = skeleton::load_map(*map_path);
    } else if (kind == ModelKind::bodytrack34) {
        map = skeleton::default_bodytrack_map();
    } else {
        map = skeleton::name_matching_map(header.joints);
    }
    map = skeleton::restrict_to_sources(map, header.joints);
    auto report = skeleton::validate_map(map, header.joints);
    if (!report.ok()) throw InvalidMap("conversion map invalid: " + report.to_string());
    if (map.entries.empty())
        throw InvalidMap("conversion map matches no joint in the input header");

    // canonical targets present in the map, in canonical order, with the
    // source x-column each one copies from
    std::vector<std::pair<std::string, std::size_t>> layout;
    for (const auto& target : skeleton::canonical_joint_set().names) {
        if (const auto* e = map.find_by_target(target))
            layout.emplace_back(target, header.x_col[*header.joints.index_of(e->source)]);
    }

    std::ostringstream os;
    os << "frame";
    for (const auto& [target, _] : layout)
        os << ',' << target << "_x," << target << "_y," << target << "_z";
    os << '\n';

    const std::size_t cells_per_row = header.joints.size() * 3 + (header.has_frame_column ? 1 : 0);
    std::size_t frame = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (num::trim(lines[li]).empty()) continue;
        auto cells = num::split(lines[li], ',');
        if (cells.size() != cells_per_row)
            throw RaggedRow(li + 1, "expected " + std::to_string(cells_per_row) + " cells, got " +
                                        std::to_string(cells.size()));
        os << frame;
        for (const auto& [_, cx] : layout)
            os << ',' << cells[cx] << ',' << cells[cx + 1] << ',' << cells[cx + 2];
        os << '\n';
        ++frame;
    }
    if (frame == 0) throw NoFrames();
    return os.str();
}

void convert_model_output(const std::filesystem::path& input, ModelKind kind,
                          const std::filesystem::path& output,
                          const std::optional<std::filesystem::path>& map_path) {
    write_file(output, convert_model_csv(read_file(input), kind, map_path));
}

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key, double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw SchemaError(std::string(key) + " is required");
        return fallback;
    }
    if (!obj[key].is_number()) throw SchemaError(std::string(key) + " must be a number");
    return obj[key].get<double>();
}

std::string string_field(const json& obj, const char* key, bool required = true) {
    if (!obj.contains(key)) {
        if (required) throw SchemaError(std::string(key) + " is required");
        return {};
    }
    if (!obj[key].is_string()) throw SchemaError(std::string(key) + " must be a string");
    return obj[key].get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
    return p.is_absolute() ? p : base / p;
}

} // namespace

TrialManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) throw SchemaError("not valid JSON");
    if (!root.is_object()) throw SchemaError("manifest root must be an object");

    TrialManifest manifest;
    if (root.contains("output_dir"))
        manifest.output_dir = resolve(base_dir, string_field(root, "output_dir"));
    else
        manifest.output_dir = base_dir / "kinebench_out";

    if (root.contains("filter_config")) {
        const auto& fc = root["filter_config"];
        if (!fc.is_object()) throw SchemaError("filter_config must be an object");
        manifest.filter_config.median_window = static_cast<int>(number_field(fc, "median_window", 5));
        manifest.filter_config.mavg_window = static_cast<int>(number_field(fc, "mavg_window", 5));
        manifest.filter_config.target_rate_hz = number_field(fc, "target_rate_hz", 30.0);
    }
    if (root.contains("alignment_config")) {
        const auto& ac = root["alignment_config"];
        if (!ac.is_object()) throw SchemaError("alignment_config must be an object");
        manifest.alignment_config.fit_window = static_cast<int>(number_field(ac, "fit_window", 180));
        manifest.alignment_config.max_offset = static_cast<int>(number_field(ac, "max_offset", 15));
    }
    if (root.contains("use_sample_std") && root["use_sample_std"].get<bool>())
        manifest.std_flavor = metrics::StdFlavor::sample;

    try {
        manifest.filter_config.validate();
        manifest.alignment_config.validate();
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }

    if (!root.contains("trials") || !root["trials"].is_array())
        throw SchemaError("trials array is required");
    for (const auto& t : root["trials"]) {
        if (!t.is_object()) throw SchemaError("each trial must be an object");
        TrialSpec spec;
        spec.subject_id = string_field(t, "subject_id");
        spec.activity_id = string_field(t, "activity_id");
        spec.model_name = string_field(t, "model_name");
        spec.pose_file_path = resolve(base_dir, string_field(t, "pose_file_path"));
        spec.imu_file_path = resolve(base_dir, string_field(t, "imu_file_path"));
        spec.imu_column_name = string_field(t, "imu_column_name");
        spec.video_rate_hz = number_field(t, "video_rate_hz", 30.0);
        spec.imu_rate_hz = number_field(t, "imu_rate_hz", 50.0);
        if (t.contains("harmonization_map_path"))
            spec.harmonization_map_path = resolve(base_dir, string_field(t, "harmonization_map_path"));

        if (!(spec.video_rate_hz > 0.0) || !(spec.imu_rate_hz > 0.0))
            throw SchemaError("trial rates must be > 0");
        if (!kinematics::builtin_activity_angle_map().has(spec.activity_id))
            throw UnknownActivity(spec.activity_id);
        for (const auto& p : {spec.pose_file_path, spec.imu_file_path})
            if (!std::filesystem::is_regular_file(p)) throw UnresolvablePath(p.string());
        if (spec.harmonization_map_path &&
            !std::filesystem::is_regular_file(*spec.harmonization_map_path))
            throw UnresolvablePath(spec.harmonization_map_path->string());
        manifest.trials.push_back(std::move(spec));
    }
    return manifest;
}

TrialManifest load_manifest(const std::filesystem::path& path) {
    auto text = read_file(path);
    auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return parse_manifest(text, base);
}

std::string serialize_manifest(const TrialManifest& manifest) {
    json root;
    root["output_dir"] = manifest.output_dir.generic_string();
    root["filter_config"] = {{"median_window", manifest.filter_config.median_window},
                             {"mavg_window", manifest.filter_config.mavg_window},
                             {"target_rate_hz", manifest.filter_config.target_rate_hz}};
    root["alignment_config"] = {{"fit_window", manifest.alignment_config.fit_window},
                                {"max_offset", manifest.alignment_config.max_offset}};
    root["use_sample_std"] = manifest.std_flavor == metrics::StdFlavor::sample;
    root["trials"] = json::array();
    for (const auto& t : manifest.trials) {
        json jt = {{"subject_id", t.subject_id},
                   {"activity_id", t.activity_id},
                   {"model_name", t.model_name},
                   {"pose_file_path", t.pose_file_path.generic_string()},
                   {"imu_file_path", t.imu_file_path.generic_string()},
                   {"imu_column_name", t.imu_column_name},
                   {"video_rate_hz", t.video_rate_hz},
                   {"imu_rate_hz", t.imu_rate_hz}};
        if (t.harmonization_map_path)
            jt["harmonization_map_path"] = t.harmonization_map_path->generic_string();
        root["trials"].push_back(std::move(jt));
    }
    return root.dump(2) + "\n";
}

} // namespace kinebench::ingest
