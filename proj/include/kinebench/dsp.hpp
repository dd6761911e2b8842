#pragma once

#include "kinebench/types.hpp"

// Signal conditioning applied identically to video- and IMU-derived angle
// series: gap interpolation, median filtering, moving-average smoothing,
// resampling, mean removal. Pure functions, no shared state.

namespace kinebench::dsp {

struct FilterConfig {
    int median_window = 5;     // odd, >= 1, in samples
    int mavg_window = 5;       // >= 1, in samples
    double target_rate_hz = 30.0;

    // Throws Error when an invariant is violated.
    void validate() const;
};

// Every output sample valid: interior gaps linearly interpolated between the
// nearest valid neighbors, leading/trailing gaps filled with the nearest valid
// value. Valid samples pass through unchanged. Throws EmptySignal.
AngleSeries interpolate_gaps(const AngleSeries& series);

// Centered median with replicate padding at the edges; output length equals
// input length. Requires a fully valid series. Throws EvenWindow /
// WindowTooLarge.
AngleSeries median_filter(const AngleSeries& series, int window);

// Centered moving mean with replicate padding. For an even window the extra
// sample is taken on the right. Throws WindowTooLarge.
AngleSeries moving_average(const AngleSeries& series, int window);

// Linear interpolation onto the uniform grid t_k = k / target_rate_hz for all
// t_k within the source time span. Throws EmptySignal.
AngleSeries resample(const AngleSeries& series, double target_rate_hz);

// Subtracts the arithmetic mean; a residual-correction pass keeps the output
// mean below 1e-9 regardless of length. Throws EmptySignal.
AngleSeries mean_remove(const AngleSeries& series);

} // namespace kinebench::dsp
