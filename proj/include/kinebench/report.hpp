#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kinebench/metrics.hpp"
#include "kinebench/types.hpp"

// Summary tables (CSV / Markdown) and self-contained SVG 1.1 figures. All
// emission is deterministic: identical inputs yield byte-identical files.

namespace kinebench::report {

enum class TableFormat { csv, markdown };

// Markdown cells render `mean ± std` with 2 decimals; CSV splits mean/std into
// separate full-precision columns. Overall tables have one row per model
// (alphabetical); per-activity tables need `metric` and have one row per
// activity with one column per model.
std::string summary_table_text(const metrics::SummaryTable& table, TableFormat format,
                               std::optional<metrics::Metric> metric = {});
void write_summary_table(const metrics::SummaryTable& table, TableFormat format,
                         const std::filesystem::path& path,
                         std::optional<metrics::Metric> metric = {});

struct PlotSpec {
    enum class Kind { overlay, metric_bars, summary_bars };
    Kind kind = Kind::overlay;
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 960;
    int height = 480;
};

// Reference plus one polyline per estimate over a shared time axis (seconds).
// All series must share the reference's length. Throws LengthMismatch.
std::string overlay_svg(const AngleSeries& ref,
                        std::span<const std::pair<std::string, AngleSeries>> estimates,
                        const PlotSpec& spec);
void plot_overlay(const AngleSeries& ref,
                  std::span<const std::pair<std::string, AngleSeries>> estimates,
                  const PlotSpec& spec, const std::filesystem::path& path);

// Grouped bars: one group per subject, one bar per model. Records must all
// belong to one activity. Absent metrics render as an annotated gap. Throws
// MixedActivities / EmptyInput.
std::string metric_bars_svg(std::span<const metrics::MetricsRecord> records,
                            metrics::Metric metric, const PlotSpec& spec);
void plot_metric_bars(std::span<const metrics::MetricsRecord> records, metrics::Metric metric,
                      const PlotSpec& spec, const std::filesystem::path& path);

// Each metric min-max scaled across models to [0, 1]; when all models share a
// value the bars sit at 0.5 with an annotation. Values are not inverted; the
// legend states which direction is better. Requires >= 2 models.
std::string normalized_summary_bars_svg(const metrics::SummaryTable& table,
                                        const PlotSpec& spec);
void normalized_summary_bars(const metrics::SummaryTable& table, const PlotSpec& spec,
                             const std::filesystem::path& path);

std::vector<std::string> default_palette();
// Honors the KINEBENCH_PALETTE env var (file of #RRGGBB lines); falls back to
// the default palette when unset or unreadable.
std::vector<std::string> active_palette();
// Stable hash of the model name into the palette.
std::string color_for_model(std::string_view model, std::span<const std::string> palette);

} // namespace kinebench::report
