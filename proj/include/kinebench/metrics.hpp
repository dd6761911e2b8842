#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kinebench/types.hpp"

// The five agreement metrics on aligned signal pairs, per-trial records, and
// the per-activity / overall aggregation. y is the reference (IMU) signal,
// yhat the estimate.

namespace kinebench::metrics {

// sqrt(mean((y - yhat)^2)). Throws LengthMismatch / EmptySignal.
double rmse(std::span<const double> y, std::span<const double> yhat);

// rmse / (max(y) - min(y)). Throws ZeroRange when y is constant.
double nrmse(std::span<const double> y, std::span<const double> yhat);

// mean(|y - yhat|). Throws LengthMismatch / EmptySignal.
double mae(std::span<const double> y, std::span<const double> yhat);

// Linear correlation, clamped to [-1, 1] against rounding. Throws
// ZeroVariance when either series is constant, LengthMismatch.
double pearson(std::span<const double> y, std::span<const double> yhat);

// 1 - SS_res / SS_tot about mean(y); may be negative. Throws ZeroVariance.
double r2(std::span<const double> y, std::span<const double> yhat);

enum class Metric { rmse, mae, nrmse, pearson, r2 };

// canonical column order for reports
inline constexpr std::array<Metric, 5> kAllMetrics{Metric::rmse, Metric::mae, Metric::nrmse,
                                                   Metric::pearson, Metric::r2};

std::string_view metric_name(Metric m);   // "rmse", "mae", ...
std::string_view metric_title(Metric m);  // "RMSE", "MAE", "NRMSE", "Correlation", "R2"
std::optional<Metric> parse_metric(std::string_view name);

struct TrialIds {
    std::string subject_id;
    std::string activity_id;
    std::string model;
};

// The agreement metrics for one (subject, activity, model) trial. nrmse,
// pearson and r2 are absent when the pair is degenerate for them (constant
// reference or estimate); alignment fields are filled by the pipeline.
struct MetricsRecord {
    std::string subject_id;
    std::string activity_id;
    std::string model;
    double rmse = 0.0;
    double mae = 0.0;
    std::optional<double> nrmse;
    std::optional<double> pearson;
    std::optional<double> r2;
    int n_samples = 0;
    std::optional<int> offset;
    std::optional<double> fit_rmse;
};

std::optional<double> metric_value(const MetricsRecord& record, Metric m);

// All five metrics on an aligned, equal-length, fully valid pair. Degenerate
// metrics are flagged absent rather than aborting.
MetricsRecord evaluate_trial(const AngleSeries& ref, const AngleSeries& est, const TrialIds& ids);

enum class Grouping {
    overall_per_model,
    per_activity_per_model,
    // mean of per-activity means instead of mean over trials
    overall_per_model_activity_means,
};

enum class StdFlavor { population, sample };

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

struct SummaryGroup {
    std::string activity_id; // empty for overall groupings
    std::string model;
    std::array<std::optional<MetricStats>, kAllMetrics.size()> stats;

    const std::optional<MetricStats>& stat(Metric m) const;
};

struct SummaryTable {
    Grouping grouping = Grouping::overall_per_model;
    StdFlavor std_flavor = StdFlavor::population;
    std::vector<std::string> models;      // alphabetical
    std::vector<std::string> activities;  // sorted by id; empty for overall
    std::vector<SummaryGroup> groups;     // activity-major, model-minor order

    const SummaryGroup* find(std::string_view activity_id, std::string_view model) const;
};

// Unweighted mean and standard deviation of each metric over the records where
// it is present. Throws EmptyInput.
SummaryTable aggregate(std::span<const MetricsRecord> records, Grouping grouping,
                       StdFlavor std_flavor = StdFlavor::population);

// One CSV row per record: subject_id,activity_id,model,rmse,nrmse,mae,
// pearson,r2,n_samples,offset,fit_rmse. Absent values are empty fields.
std::string records_to_csv(std::span<const MetricsRecord> records);
void write_records_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);
std::vector<MetricsRecord> parse_records_csv(std::string_view text);
std::vector<MetricsRecord> read_records_csv(const std::filesystem::path& path);

} // namespace kinebench::metrics
