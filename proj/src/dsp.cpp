#include "kinebench/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kinebench/error.hpp"

namespace kinebench::dsp {

namespace {

void require_fully_valid(const AngleSeries& series, const char* op) {
    if (series.size() == 0) throw EmptySignal(std::string(op) + ": empty series");
    if (!series.all_valid())
        throw Error(std::string(op) + ": series has invalid samples; interpolate first");
}

AngleSeries like(const AngleSeries& src, std::vector<double> values) {
    AngleSeries out = src;
    out.valid.assign(values.size(), 1);
    out.values = std::move(values);
    return out;
}

} // namespace

void FilterConfig::validate() const {
    if (median_window < 1 || median_window % 2 == 0)
        throw Error("filter config: median_window must be odd and >= 1");
    if (mavg_window < 1) throw Error("filter config: mavg_window must be >= 1");
    if (!(target_rate_hz > 0.0)) throw Error("filter config: target_rate_hz must be > 0");
}

AngleSeries interpolate_gaps(const AngleSeries& series) {
    const std::size_t n = series.size();
    std::vector<std::size_t> valid_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (series.valid[i]) valid_idx.push_back(i);
    if (valid_idx.empty()) throw EmptySignal();

    std::vector<double> out(series.values);
    // leading / trailing: constant extension of the nearest valid sample
    for (std::size_t i = 0; i < valid_idx.front(); ++i) out[i] = out[valid_idx.front()];
    for (std::size_t i = valid_idx.back() + 1; i < n; ++i) out[i] = out[valid_idx.back()];
    // interior gaps: linear between the bracketing valid samples
    for (std::size_t k = 0; k + 1 < valid_idx.size(); ++k) {
        const std::size_t a = valid_idx[k];
        const std::size_t b = valid_idx[k + 1];
        const double va = out[a];
        const double vb = out[b];
        for (std::size_t i = a + 1; i < b; ++i) {
            const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
            out[i] = va + t * (vb - va);
        }
    }
    return like(series, std::move(out));
}

AngleSeries median_filter(const AngleSeries& series, int window) {
    require_fully_valid(series, "median_filter");
    if (window % 2 == 0) throw EvenWindow("median window must be odd: " + std::to_string(window));
    if (window < 1 || static_cast<std::size_t>(window) > series.size())
        throw WindowTooLarge("median window " + std::to_string(window) + " exceeds series length " +
                             std::to_string(series.size()));

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(series.size());
    const std::ptrdiff_t half = window / 2;
    std::vector<double> out(series.size());
    std::vector<double> buf(static_cast<std::size_t>(window));
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t k = -half; k <= half; ++k) {
            const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(i + k, 0, n - 1);
            buf[static_cast<std::size_t>(k + half)] = series.values[static_cast<std::size_t>(j)];
        }
        auto mid = buf.begin() + half;
        std::nth_element(buf.begin(), mid, buf.end());
        out[static_cast<std::size_t>(i)] = *mid;
    }
    return like(series, std::move(out));
}

AngleSeries moving_average(const AngleSeries& series, int window) {
    require_fully_valid(series, "moving_average");
    if (window < 1 || static_cast<std::size_t>(window) > series.size())
        throw WindowTooLarge("moving-average window " + std::to_string(window) +
                             " exceeds series length " + std::to_string(series.size()));

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(series.size());
    const std::ptrdiff_t left = (window - 1) / 2;
    const std::ptrdiff_t right = window / 2;
    std::vector<double> out(series.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::ptrdiff_t k = -left; k <= right; ++k) {
            const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(i + k, 0, n - 1);
            sum += series.values[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(window);
    }
    return like(series, std::move(out));
}

AngleSeries resample(const AngleSeries& series, double target_rate_hz) {
    require_fully_valid(series, "resample");
    if (!(target_rate_hz > 0.0)) throw Error("resample: target rate must be > 0");
    if (!(series.sample_rate_hz > 0.0)) throw Error("resample: source rate must be > 0");

    const std::size_t n = series.size();
    const double src_rate = series.sample_rate_hz;
    if (n == 1) {
        AngleSeries single = like(series, {series.values[0]});
        single.sample_rate_hz = target_rate_hz;
        return single;
    }
    const double span = static_cast<double>(n - 1) / src_rate;
    // absorb term so a grid point landing exactly on the span survives fp
    const double grid_end = span * target_rate_hz;
    const std::size_t m =
        static_cast<std::size_t>(std::floor(grid_end * (1.0 + 1e-12) + 1e-9)) + 1;

    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double pos = (static_cast<double>(k) / target_rate_hz) * src_rate;
        std::size_t i0 = static_cast<std::size_t>(std::floor(std::max(pos, 0.0)));
        if (i0 > n - 2) i0 = n - 2;
        const double frac = pos - static_cast<double>(i0);
        out[k] = series.values[i0] + frac * (series.values[i0 + 1] - series.values[i0]);
    }
    AngleSeries result = like(series, std::move(out));
    result.sample_rate_hz = target_rate_hz;
    return result;
}

AngleSeries mean_remove(const AngleSeries& series) {
    require_fully_valid(series, "mean_remove");
    const double n = static_cast<double>(series.size());
    const double mean = std::accumulate(series.values.begin(), series.values.end(), 0.0) / n;
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) out[i] = series.values[i] - mean;
    // kill the summation residual so the output mean stays < 1e-9 on any length
    const double residual = std::accumulate(out.begin(), out.end(), 0.0) / n;
    for (auto& v : out) v -= residual;
    return like(series, std::move(out));
}

} // namespace kinebench::dsp
