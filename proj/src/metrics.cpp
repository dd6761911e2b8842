#include "kinebench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kinebench/error.hpp"
#include "kinebench/numio.hpp"

namespace kinebench::metrics {

namespace {

void check_pair(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw LengthMismatch();
    if (y.empty()) throw EmptySignal("metrics: empty pair");
}

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

} // namespace

double rmse(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - yhat[i];
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(y.size()));
}

double nrmse(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat);
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    const double range = *mx - *mn;
    if (range <= 0.0) throw ZeroRange();
    return rmse(y, yhat) / range;
}

double mae(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += std::abs(y[i] - yhat[i]);
    return sum / static_cast<double>(y.size());
}

double pearson(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat);
    if (y.size() < 2) throw EmptySignal("pearson: need at least 2 samples");
    const double my = mean_of(y);
    const double mh = mean_of(yhat);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = y[i] - my;
        const double b = yhat[i] - mh;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVariance();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double r2(std::span<const double> y, std::span<const double> yhat) {
    check_pair(y, yhat);
    if (y.size() < 2) throw EmptySignal("r2: need at least 2 samples");
    const double my = mean_of(y);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - yhat[i];
        const double t = y[i] - my;
        ss_res += r * r;
        ss_tot += t * t;
    }
    if (ss_tot == 0.0) throw ZeroVariance();
    return 1.0 - ss_res / ss_tot;
}

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::rmse: return "rmse";
        case Metric::mae: return "mae";
        case Metric::nrmse: return "nrmse";
        case Metric::pearson: return "pearson";
        case Metric::r2: return "r2";
    }
    return {};
}

std::string_view metric_title(Metric m) {
    switch (m) {
        case Metric::rmse: return "RMSE";
        case Metric::mae: return "MAE";
        case Metric::nrmse: return "NRMSE";
        case Metric::pearson: return "Correlation";
        case Metric::r2: return "R2";
    }
    return {};
}

std::optional<Metric> parse_metric(std::string_view name) {
    for (Metric m : kAllMetrics)
        if (metric_name(m) == name) return m;
    return std::nullopt;
}

std::optional<double> metric_value(const MetricsRecord& record, Metric m) {
    switch (m) {
        case Metric::rmse: return record.rmse;
        case Metric::mae: return record.mae;
        case Metric::nrmse: return record.nrmse;
        case Metric::pearson: return record.pearson;
        case Metric::r2: return record.r2;
    }
    return std::nullopt;
}

MetricsRecord evaluate_trial(const AngleSeries& ref, const AngleSeries& est, const TrialIds& ids) {
    if (ref.size() != est.size()) throw LengthMismatch();
    if (ref.size() < 2) throw EmptySignal("evaluate_trial: need at least 2 samples");
    if (!ref.all_valid() || !est.all_valid())
        throw Error("evaluate_trial: pair must be fully valid");

    std::span<const double> y(ref.values);
    std::span<const double> yhat(est.values);
    MetricsRecord rec;
    rec.subject_id = ids.subject_id;
    rec.activity_id = ids.activity_id;
    rec.model = ids.model;
    rec.rmse = rmse(y, yhat);
    rec.mae = mae(y, yhat);
    rec.n_samples = static_cast<int>(ref.size());
    try {
        rec.nrmse = nrmse(y, yhat);
    } catch (const ZeroRange&) {
    }
    try {
        rec.pearson = pearson(y, yhat);
    } catch (const ZeroVariance&) {
    }
    try {
        rec.r2 = r2(y, yhat);
    } catch (const ZeroVariance&) {
    }
    return rec;
}

const std::optional<MetricStats>& SummaryGroup::stat(Metric m) const {
    return stats[static_cast<std::size_t>(std::find(kAllMetrics.begin(), kAllMetrics.end(), m) -
                                          kAllMetrics.begin())];
}

const SummaryGroup* SummaryTable::find(std::string_view activity_id,
                                       std::string_view model) const {
    for (const auto& g : groups)
        if (g.activity_id == activity_id && g.model == model) return &g;
    return nullptr;
}

namespace {

std::optional<MetricStats> stats_over(const std::vector<double>& vals, StdFlavor flavor) {
    if (vals.empty()) return std::nullopt;
    const double n = static_cast<double>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    double var = 0.0;
    if (flavor == StdFlavor::population)
        var = ss / n;
    else
        var = vals.size() > 1 ? ss / (n - 1.0) : 0.0;
    return MetricStats{mean, std::sqrt(var), static_cast<int>(vals.size())};
}

SummaryGroup make_group(std::string activity, std::string model,
                        std::span<const MetricsRecord* const> records, StdFlavor flavor) {
    SummaryGroup g;
    g.activity_id = std::move(activity);
    g.model = std::move(model);
    for (std::size_t mi = 0; mi < kAllMetrics.size(); ++mi) {
        std::vector<double> vals;
        for (const auto* r : records)
            if (auto v = metric_value(*r, kAllMetrics[mi])) vals.push_back(*v);
        g.stats[mi] = stats_over(vals, flavor);
    }
    return g;
}

} // namespace

SummaryTable aggregate(std::span<const MetricsRecord> records, Grouping grouping,
                       StdFlavor std_flavor) {
    if (records.empty()) throw EmptyInput();

    SummaryTable table;
    table.grouping = grouping;
    table.std_flavor = std_flavor;

    std::set<std::string> model_set;
    std::set<std::string> activity_set;
    for (const auto& r : records) {
        model_set.insert(r.model);
        activity_set.insert(r.activity_id);
    }
    table.models.assign(model_set.begin(), model_set.end());
    if (grouping == Grouping::per_activity_per_model)
        table.activities.assign(activity_set.begin(), activity_set.end());

    auto records_of = [&](std::string_view activity, std::string_view model) {
        std::vector<const MetricsRecord*> out;
        for (const auto& r : records)
            if (r.model == model && (activity.empty() || r.activity_id == activity))
                out.push_back(&r);
        return out;
    };

    switch (grouping) {
        case Grouping::overall_per_model:
            for (const auto& model : table.models)
                table.groups.push_back(make_group("", model, records_of("", model), std_flavor));
            break;
        case Grouping::per_activity_per_model:
            for (const auto& activity : table.activities)
                for (const auto& model : table.models) {
                    auto recs = records_of(activity, model);
                    if (!recs.empty())
                        table.groups.push_back(make_group(activity, model, recs, std_flavor));
                }
            break;
        case Grouping::overall_per_model_activity_means: {
            // mean/std over per-activity means rather than over trials
            auto per_activity = aggregate(records, Grouping::per_activity_per_model, std_flavor);
            for (const auto& model : table.models) {
                SummaryGroup g;
                g.model = model;
                for (std::size_t mi = 0; mi < kAllMetrics.size(); ++mi) {
                    std::vector<double> means;
                    for (const auto& ag : per_activity.groups)
                        if (ag.model == model && ag.stats[mi]) means.push_back(ag.stats[mi]->mean);
                    g.stats[mi] = stats_over(means, std_flavor);
                }
                table.groups.push_back(std::move(g));
            }
            break;
        }
    }
    return table;
}

namespace {

constexpr std::string_view kRecordsHeader =
    "subject_id,activity_id,model,rmse,nrmse,mae,pearson,r2,n_samples,offset,fit_rmse";

std::string opt_field(const std::optional<double>& v) {
    return v ? num::format_double(*v) : std::string{};
}

} // namespace

std::string records_to_csv(std::span<const MetricsRecord> records) {
    std::ostringstream os;
    os << kRecordsHeader << '\n';
    for (const auto& r : records) {
        os << r.subject_id << ',' << r.activity_id << ',' << r.model << ','
           << num::format_double(r.rmse) << ',' << opt_field(r.nrmse) << ','
           << num::format_double(r.mae) << ',' << opt_field(r.pearson) << ','
           << opt_field(r.r2) << ',' << r.n_samples << ','
           << (r.offset ? std::to_string(*r.offset) : std::string{}) << ','
           << opt_field(r.fit_rmse) << '\n';
    }
    return os.str();
}

void write_records_csv(std::span<const MetricsRecord> records,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << records_to_csv(records);
}

std::vector<MetricsRecord> parse_records_csv(std::string_view text) {
    auto lines = num::split_lines(text);
    if (lines.empty() || num::trim(lines[0]) != kRecordsHeader)
        throw SchemaError("records CSV header mismatch");

    std::vector<MetricsRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (num::trim(lines[li]).empty()) continue;
        auto cells = num::split(lines[li], ',');
        if (cells.size() != 11)
            throw SchemaError("records CSV line " + std::to_string(li + 1) + ": expected 11 fields");
        auto number = [&](std::size_t idx) {
            auto v = num::parse_double(cells[idx]);
            if (!v)
                throw SchemaError("records CSV line " + std::to_string(li + 1) + ": bad number '" +
                                  std::string(cells[idx]) + "'");
            return *v;
        };
        auto opt_number = [&](std::size_t idx) -> std::optional<double> {
            if (num::trim(cells[idx]).empty()) return std::nullopt;
            return number(idx);
        };
        MetricsRecord r;
        r.subject_id = std::string(cells[0]);
        r.activity_id = std::string(cells[1]);
        r.model = std::string(cells[2]);
        r.rmse = number(3);
        r.nrmse = opt_number(4);
        r.mae = number(5);
        r.pearson = opt_number(6);
        r.r2 = opt_number(7);
        r.n_samples = static_cast<int>(number(8));
        if (auto o = opt_number(9)) r.offset = static_cast<int>(*o);
        r.fit_rmse = opt_number(10);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<MetricsRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_records_csv(buf.str());
}

} // namespace kinebench::metrics
