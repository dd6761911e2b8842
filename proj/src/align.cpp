#include "kinebench/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "kinebench/error.hpp"

namespace kinebench::align {

namespace {

void check_inputs(const AngleSeries& ref, const AngleSeries& est) {
    if (ref.size() < 2 || est.size() < 2) throw InsufficientOverlap();
    if (!ref.all_valid() || !est.all_valid())
        throw Error("align: series must be fully valid; interpolate first");
    const double a = ref.sample_rate_hz;
    const double b = est.sample_rate_hz;
    if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b)))
        throw RateMismatch("sample rates differ: " + std::to_string(a) + " vs " +
                           std::to_string(b));
}

// Overlap of ref with est shifted by k, in ref indices: [first, last).
// ref[j] pairs with est[j + k].
std::pair<std::ptrdiff_t, std::ptrdiff_t> overlap_range(std::ptrdiff_t ref_len,
                                                        std::ptrdiff_t est_len,
                                                        std::ptrdiff_t k) {
    const std::ptrdiff_t first = std::max<std::ptrdiff_t>(0, -k);
    const std::ptrdiff_t last = std::min(ref_len, est_len - k);
    return {first, last};
}

} // namespace

void AlignmentConfig::validate() const {
    if (fit_window < 2) throw Error("alignment config: fit_window must be >= 2");
    if (max_offset < 0) throw Error("alignment config: max_offset must be >= 0");
}

AlignmentResult best_offset(const AngleSeries& ref, const AngleSeries& est,
                            const AlignmentConfig& cfg) {
    cfg.validate();
    check_inputs(ref, est);

    const auto ref_len = static_cast<std::ptrdiff_t>(ref.size());
    const auto est_len = static_cast<std::ptrdiff_t>(est.size());

    bool found = false;
    int best_k = 0;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (int k = -cfg.max_offset; k <= cfg.max_offset; ++k) {
        auto [first, last] = overlap_range(ref_len, est_len, k);
        if (last - first < 2) continue;
        const std::ptrdiff_t w = std::min<std::ptrdiff_t>(cfg.fit_window, last - first);
        double sum_sq = 0.0;
        for (std::ptrdiff_t j = first; j < first + w; ++j) {
            const double d = ref.values[static_cast<std::size_t>(j)] -
                             est.values[static_cast<std::size_t>(j + k)];
            sum_sq += d * d;
        }
        const double rmse = std::sqrt(sum_sq / static_cast<double>(w));
        const bool better =
            rmse < best_rmse ||
            (rmse == best_rmse &&
             (std::abs(k) < std::abs(best_k) || (std::abs(k) == std::abs(best_k) && k < best_k)));
        if (!found || better) {
            found = true;
            best_k = k;
            best_rmse = rmse;
        }
    }
    if (!found) throw InsufficientOverlap();

    auto [first, last] = overlap_range(ref_len, est_len, best_k);
    AlignmentResult result;
    result.offset = best_k;
    result.fit_rmse = best_rmse;
    result.aligned_length = static_cast<std::size_t>(last - first);
    return result;
}

std::pair<AngleSeries, AngleSeries> apply_offset_and_trim(const AngleSeries& ref,
                                                          const AngleSeries& est, int offset) {
    check_inputs(ref, est);
    auto [first, last] = overlap_range(static_cast<std::ptrdiff_t>(ref.size()),
                                       static_cast<std::ptrdiff_t>(est.size()), offset);
    if (last - first < 2) throw InsufficientOverlap();

    auto slice = [](const AngleSeries& s, std::ptrdiff_t from, std::ptrdiff_t count) {
        AngleSeries out = s;
        out.values.assign(s.values.begin() + from, s.values.begin() + from + count);
        out.valid.assign(s.valid.begin() + from, s.valid.begin() + from + count);
        return out;
    };
    const std::ptrdiff_t count = last - first;
    return {slice(ref, first, count), slice(est, first + offset, count)};
}

} // namespace kinebench::align
