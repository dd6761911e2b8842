#include "kinebench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kinebench/error.hpp"
#include "kinebench/kinematics.hpp"
#include "kinebench/numio.hpp"

namespace kinebench::report {

namespace {

using metrics::Metric;
using metrics::MetricStats;
using metrics::SummaryTable;

std::string pm_cell(const std::optional<MetricStats>& stats) {
    if (!stats) return "n/a";
    return num::format_fixed(stats->mean, 2) + " ± " + num::format_fixed(stats->stddev, 2);
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string overall_markdown(const SummaryTable& table) {
    std::ostringstream os;
    os << "| Model |";
    for (Metric m : metrics::kAllMetrics) os << ' ' << metrics::metric_title(m) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < metrics::kAllMetrics.size(); ++i) os << "---|";
    os << '\n';
    for (const auto& model : table.models) {
        const auto* g = table.find("", model);
        os << "| " << model << " |";
        for (Metric m : metrics::kAllMetrics) os << ' ' << pm_cell(g ? g->stat(m) : std::nullopt) << " |";
        os << '\n';
    }
    return os.str();
}

std::string overall_csv(const SummaryTable& table) {
    std::ostringstream os;
    os << "model";
    for (Metric m : metrics::kAllMetrics)
        os << ',' << metrics::metric_name(m) << "_mean," << metrics::metric_name(m) << "_std";
    os << '\n';
    for (const auto& model : table.models) {
        const auto* g = table.find("", model);
        os << model;
        for (Metric m : metrics::kAllMetrics) {
            const auto& st = g ? g->stat(m) : std::nullopt;
            if (st)
                os << ',' << num::format_double(st->mean) << ',' << num::format_double(st->stddev);
            else
                os << ",,";
        }
        os << '\n';
    }
    return os.str();
}

std::string per_activity_markdown(const SummaryTable& table, Metric metric) {
    std::ostringstream os;
    os << "| ID | Legend |";
    for (const auto& model : table.models) os << ' ' << model << " |";
    os << "\n|---|---|";
    for (std::size_t i = 0; i < table.models.size(); ++i) os << "---|";
    os << '\n';
    for (const auto& activity : table.activities) {
        os << "| " << activity << " | " << kinematics::activity_legend(activity) << " |";
        for (const auto& model : table.models) {
            const auto* g = table.find(activity, model);
            os << ' ' << pm_cell(g ? g->stat(metric) : std::nullopt) << " |";
        }
        os << '\n';
    }
    return os.str();
}

std::string per_activity_csv(const SummaryTable& table, Metric metric) {
    std::ostringstream os;
    os << "activity_id,legend";
    for (const auto& model : table.models) os << ',' << model << "_mean," << model << "_std";
    os << '\n';
    for (const auto& activity : table.activities) {
        os << activity << ',' << kinematics::activity_legend(activity);
        for (const auto& model : table.models) {
            const auto* g = table.find(activity, model);
            const auto& st = g ? g->stat(metric) : std::nullopt;
            if (st)
                os << ',' << num::format_double(st->mean) << ',' << num::format_double(st->stddev);
            else
                os << ",,";
        }
        os << '\n';
    }
    return os.str();
}

} // namespace

std::string summary_table_text(const SummaryTable& table, TableFormat format,
                               std::optional<Metric> metric) {
    if (table.grouping == metrics::Grouping::per_activity_per_model) {
        if (!metric) throw Error("per-activity tables are per metric; pass one");
        return format == TableFormat::markdown ? per_activity_markdown(table, *metric)
                                               : per_activity_csv(table, *metric);
    }
    return format == TableFormat::markdown ? overall_markdown(table) : overall_csv(table);
}

void write_summary_table(const SummaryTable& table, TableFormat format,
                         const std::filesystem::path& path, std::optional<Metric> metric) {
    write_text_file(path, summary_table_text(table, format, metric));
}

// ----------------------------------------------------------------------------
// SVG
// ----------------------------------------------------------------------------

namespace {

constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 52.0;

std::string esc(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) { return num::format_fixed(v, 2); }

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    // pixel range (p0 maps lo, p1 maps hi)
    double p0 = 0.0;
    double p1 = 1.0;

    double map(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

// round to a pleasant tick step of shape {1,2,5}*10^k
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(target_ticks, 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag * (1 + 1e-12)) return m * mag;
    }
    return 10.0 * mag;
}

void open_svg(std::ostringstream& os, const PlotSpec& spec) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
       << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' '
       << spec.height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
       << "\" fill=\"#ffffff\"/>\n";
    if (!spec.title.empty())
        os << "<text x=\"" << px(spec.width / 2.0)
           << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
           << esc(spec.title) << "</text>\n";
}

void axis_labels(std::ostringstream& os, const PlotSpec& spec) {
    if (!spec.x_label.empty())
        os << "<text x=\"" << px((kMarginLeft + spec.width - kMarginRight) / 2.0) << "\" y=\""
           << px(spec.height - 10.0)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << esc(spec.x_label) << "</text>\n";
    if (!spec.y_label.empty())
        os << "<text x=\"16\" y=\"" << px((kMarginTop + spec.height - kMarginBottom) / 2.0)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
              "transform=\"rotate(-90 16 "
           << px((kMarginTop + spec.height - kMarginBottom) / 2.0) << ")\">" << esc(spec.y_label)
           << "</text>\n";
}

void frame_rect(std::ostringstream& os, const PlotSpec& spec) {
    os << "<rect x=\"" << px(kMarginLeft) << "\" y=\"" << px(kMarginTop) << "\" width=\""
       << px(spec.width - kMarginLeft - kMarginRight) << "\" height=\""
       << px(spec.height - kMarginTop - kMarginBottom)
       << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
}

void y_ticks(std::ostringstream& os, const Axis& y) {
    const double step = nice_step(y.hi - y.lo, 5);
    const double first = std::ceil(y.lo / step - 1e-9) * step;
    for (double v = first; v <= y.hi + 1e-9 * std::abs(step); v += step) {
        const double py = y.map(v);
        os << "<line x1=\"" << px(kMarginLeft - 4) << "\" y1=\"" << px(py) << "\" x2=\""
           << px(kMarginLeft) << "\" y2=\"" << px(py) << "\" stroke=\"#444444\"/>\n"
           << "<text class=\"ytick\" x=\"" << px(kMarginLeft - 8) << "\" y=\"" << px(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << num::format_fixed(v, 2) << "</text>\n";
    }
}

void x_ticks_numeric(std::ostringstream& os, const Axis& x, const PlotSpec& spec) {
    const double step = nice_step(x.hi - x.lo, 6);
    const double first = std::ceil(x.lo / step - 1e-9) * step;
    for (double v = first; v <= x.hi + 1e-9 * std::abs(step); v += step) {
        const double pxv = x.map(v);
        os << "<line x1=\"" << px(pxv) << "\" y1=\"" << px(spec.height - kMarginBottom)
           << "\" x2=\"" << px(pxv) << "\" y2=\"" << px(spec.height - kMarginBottom + 4)
           << "\" stroke=\"#444444\"/>\n"
           << "<text class=\"xtick\" x=\"" << px(pxv) << "\" y=\""
           << px(spec.height - kMarginBottom + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << num::format_fixed(v, 2) << "</text>\n";
    }
}

struct LegendEntry {
    std::string label;
    std::string color;
};

void legend_box(std::ostringstream& os, std::span<const LegendEntry> entries,
                const PlotSpec& spec, std::string_view note = {}) {
    const double x = spec.width - kMarginRight - 190.0;
    double y = kMarginTop + 10.0;
    for (const auto& e : entries) {
        os << "<line x1=\"" << px(x) << "\" y1=\"" << px(y) << "\" x2=\"" << px(x + 22) << "\" y2=\""
           << px(y) << "\" stroke=\"" << e.color << "\" stroke-width=\"3\"/>\n"
           << "<text x=\"" << px(x + 28) << "\" y=\"" << px(y + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(e.label) << "</text>\n";
        y += 16.0;
    }
    if (!note.empty())
        os << "<text x=\"" << px(x) << "\" y=\"" << px(y + 4)
           << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#555555\">" << esc(note)
           << "</text>\n";
}

} // namespace

std::vector<std::string> default_palette() {
    return {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
            "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
}

std::vector<std::string> active_palette() {
    const char* env = std::getenv("KINEBENCH_PALETTE");
    if (!env || !*env) return default_palette();
    std::ifstream in(env);
    if (!in) return default_palette();
    std::vector<std::string> colors;
    std::string line;
    auto is_hex = [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    };
    while (std::getline(in, line)) {
        auto t = num::trim(line);
        if (t.size() == 7 && t[0] == '#' && std::all_of(t.begin() + 1, t.end(), is_hex))
            colors.emplace_back(t);
    }
    return colors.empty() ? default_palette() : colors;
}

std::string color_for_model(std::string_view model, std::span<const std::string> palette) {
    // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : model) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return palette[h % palette.size()];
}

std::string overlay_svg(const AngleSeries& ref,
                        std::span<const std::pair<std::string, AngleSeries>> estimates,
                        const PlotSpec& spec) {
    const std::size_t n = ref.size();
    if (n < 2) throw LengthMismatch();
    for (const auto& [_, est] : estimates)
        if (est.size() != n) throw LengthMismatch();

    double lo = ref.values[0], hi = ref.values[0];
    auto widen = [&](const AngleSeries& s) {
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };
    widen(ref);
    for (const auto& [_, est] : estimates) widen(est);
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);

    Axis x{0.0, static_cast<double>(n - 1) / ref.sample_rate_hz, kMarginLeft,
           spec.width - kMarginRight};
    Axis y{lo - pad, hi + pad, spec.height - kMarginBottom, kMarginTop};

    std::ostringstream os;
    open_svg(os, spec);
    frame_rect(os, spec);
    y_ticks(os, y);
    x_ticks_numeric(os, x, spec);
    axis_labels(os, spec);

    auto palette = active_palette();
    auto polyline = [&](const AngleSeries& s, const std::string& color, double width) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << px(width)
           << "\" points=\"";
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) os << ' ';
            os << px(x.map(static_cast<double>(i) / ref.sample_rate_hz)) << ','
               << px(y.map(s.values[i]));
        }
        os << "\"/>\n";
    };

    std::vector<LegendEntry> legend;
    polyline(ref, "#222222", 2.0);
    legend.push_back({"imu (reference)", "#222222"});
    for (const auto& [model, est] : estimates) {
        const auto color = color_for_model(model, palette);
        polyline(est, color, 1.5);
        legend.push_back({model, color});
    }
    legend_box(os, legend, spec);
    os << "</svg>\n";
    return os.str();
}

void plot_overlay(const AngleSeries& ref,
                  std::span<const std::pair<std::string, AngleSeries>> estimates,
                  const PlotSpec& spec, const std::filesystem::path& path) {
    write_text_file(path, overlay_svg(ref, estimates, spec));
}

namespace {

// Grouped bar scaffolding shared by the two bar plots. `groups` are x-axis
// labels; bars[i][j] is the (possibly absent) value for group i, series j.
std::string grouped_bars_svg(const std::vector<std::string>& groups,
                             const std::vector<std::string>& series,
                             const std::vector<std::vector<std::optional<double>>>& bars,
                             const PlotSpec& spec, double forced_lo, double forced_hi,
                             bool force_range, std::string_view legend_note) {
    double lo = 0.0, hi = 0.0;
    if (force_range) {
        lo = forced_lo;
        hi = forced_hi;
    } else {
        for (const auto& row : bars)
            for (const auto& v : row)
                if (v) {
                    lo = std::min(lo, *v);
                    hi = std::max(hi, *v);
                }
        if (hi - lo < 1e-12) hi = lo + 1.0;
        hi += 0.05 * (hi - lo);
        if (lo < 0.0) lo -= 0.05 * (hi - lo);
    }

    Axis y{lo, hi, spec.height - kMarginBottom, kMarginTop};
    const double plot_w = spec.width - kMarginLeft - kMarginRight;
    const double group_w = plot_w / static_cast<double>(groups.size());
    const double slot_w = group_w / static_cast<double>(series.size() + 1);

    std::ostringstream os;
    open_svg(os, spec);
    frame_rect(os, spec);
    y_ticks(os, y);

    auto palette = active_palette();
    std::vector<LegendEntry> legend;
    for (const auto& s : series) legend.push_back({s, color_for_model(s, palette)});

    const double baseline = y.map(std::clamp(0.0, lo, hi));
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const double gx = kMarginLeft + group_w * static_cast<double>(gi);
        os << "<text class=\"xtick\" x=\"" << px(gx + group_w / 2.0) << "\" y=\""
           << px(spec.height - kMarginBottom + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << esc(groups[gi]) << "</text>\n";
        for (std::size_t si = 0; si < series.size(); ++si) {
            const double bx = gx + slot_w * (static_cast<double>(si) + 0.5);
            if (!bars[gi][si]) {
                os << "<text class=\"absent\" x=\"" << px(bx + slot_w / 2.0) << "\" y=\""
                   << px(baseline - 4)
                   << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" "
                      "fill=\"#888888\">n/a</text>\n";
                continue;
            }
            const double vy = y.map(*bars[gi][si]);
            const double top = std::min(vy, baseline);
            const double h = std::abs(vy - baseline);
            os << "<rect class=\"bar\" x=\"" << px(bx) << "\" y=\"" << px(top) << "\" width=\""
               << px(slot_w) << "\" height=\"" << px(h) << "\" fill=\""
               << legend[si].color << "\"/>\n";
        }
    }
    axis_labels(os, spec);
    legend_box(os, legend, spec, legend_note);
    os << "</svg>\n";
    return os.str();
}

} // namespace

std::string metric_bars_svg(std::span<const metrics::MetricsRecord> records,
                            metrics::Metric metric, const PlotSpec& spec) {
    if (records.empty()) throw EmptyInput();
    std::set<std::string> activity_set;
    std::set<std::string> subject_set;
    std::set<std::string> model_set;
    for (const auto& r : records) {
        activity_set.insert(r.activity_id);
        subject_set.insert(r.subject_id);
        model_set.insert(r.model);
    }
    if (activity_set.size() > 1) throw MixedActivities();

    const std::vector<std::string> subjects(subject_set.begin(), subject_set.end());
    const std::vector<std::string> models(model_set.begin(), model_set.end());
    std::vector<std::vector<std::optional<double>>> bars(
        subjects.size(), std::vector<std::optional<double>>(models.size()));
    for (const auto& r : records) {
        const auto gi = static_cast<std::size_t>(
            std::find(subjects.begin(), subjects.end(), r.subject_id) - subjects.begin());
        const auto si = static_cast<std::size_t>(
            std::find(models.begin(), models.end(), r.model) - models.begin());
        bars[gi][si] = metrics::metric_value(r, metric);
    }
    return grouped_bars_svg(subjects, models, bars, spec, 0, 0, false, {});
}

void plot_metric_bars(std::span<const metrics::MetricsRecord> records, metrics::Metric metric,
                      const PlotSpec& spec, const std::filesystem::path& path) {
    write_text_file(path, metric_bars_svg(records, metric, spec));
}

std::string normalized_summary_bars_svg(const SummaryTable& table, const PlotSpec& spec) {
    if (table.models.size() < 2) throw Error("normalized summary bars need at least 2 models");

    std::vector<std::string> groups;
    std::vector<std::vector<std::optional<double>>> bars;
    bool any_degenerate = false;
    for (Metric m : metrics::kAllMetrics) {
        groups.emplace_back(metrics::metric_title(m));
        std::vector<std::optional<double>> row;
        std::vector<double> means;
        for (const auto& model : table.models) {
            const auto* g = table.find("", model);
            const auto& st = g ? g->stat(m) : std::nullopt;
            if (st) means.push_back(st->mean);
        }
        const auto [mn_it, mx_it] = std::minmax_element(means.begin(), means.end());
        for (const auto& model : table.models) {
            const auto* g = table.find("", model);
            const auto& st = g ? g->stat(m) : std::nullopt;
            if (!st) {
                row.push_back(std::nullopt);
                continue;
            }
            if (means.empty() || *mx_it - *mn_it < 1e-300) {
                row.push_back(0.5); // degenerate scale: every model shares the value
                any_degenerate = true;
            } else {
                row.push_back((st->mean - *mn_it) / (*mx_it - *mn_it));
            }
        }
        bars.push_back(std::move(row));
    }

    std::string note = "lower better: RMSE/NRMSE/MAE; higher better: Correlation/R2";
    if (any_degenerate) note += " (flat metric rendered at 0.5)";
    return grouped_bars_svg(groups, table.models, bars, spec, 0.0, 1.05, true, note);
}

void normalized_summary_bars(const SummaryTable& table, const PlotSpec& spec,
                             const std::filesystem::path& path) {
    write_text_file(path, normalized_summary_bars_svg(table, spec));
}

} // namespace kinebench::report
