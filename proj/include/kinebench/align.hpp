#pragma once

#include <cstddef>
#include <utility>

#include "kinebench/types.hpp"

// Temporal synchronization of an estimated angle series to a reference by
// exhaustive grid search over integer sample offsets minimizing RMSE over an
// initial fitting window, then trimming both to common support.

namespace kinebench::align {

struct AlignmentConfig {
    int fit_window = 180;  // samples over which the fit RMSE is evaluated
    int max_offset = 15;   // search range is [-max_offset, +max_offset]

    void validate() const;
};

// offset > 0 means the estimate lags the reference by that many samples
// (est[i + offset] lines up with ref[i]).
struct AlignmentResult {
    int offset = 0;
    double fit_rmse = 0.0;
    std::size_t aligned_length = 0;
};

// Exhaustive search over 2*max_offset+1 candidates. Fit RMSE is evaluated on
// the first min(fit_window, overlap) samples of the overlap at each candidate.
// Ties break toward smaller |offset|, then smaller signed offset. Both inputs
// must be fully valid, mean-removed, and share a sample rate. Throws
// RateMismatch / InsufficientOverlap.
AlignmentResult best_offset(const AngleSeries& ref, const AngleSeries& est,
                            const AlignmentConfig& cfg = {});

// Shifts est by offset and trims both series to their maximal overlap; index i
// of both outputs refers to the same instant. Throws InsufficientOverlap.
std::pair<AngleSeries, AngleSeries> apply_offset_and_trim(const AngleSeries& ref,
                                                          const AngleSeries& est, int offset);

} // namespace kinebench::align
