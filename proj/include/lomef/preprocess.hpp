#pragma once

#include <utility>
#include <vector>

#include "lomef/core.hpp"

namespace lomef {

/// How one series was transformed before reaching a global model.
struct ScalingRecord {
    double mean_factor = 1.0;
    bool log_applied = false;
    bool plus_one_applied = false;
};

struct FourierConfig {
    std::vector<int> periods;
    /// Harmonic count per period (same length as `periods`).
    std::vector<int> harmonics;

    int n_terms() const;
    /// Throws InvalidArgument unless 1 <= K <= 25 and 2K <= period everywhere.
    void check() const;
};

struct WindowConfig {
    int input_len = 1;
    int output_len = 1;

    /// Input window of ceil(1.5 * horizon), output window of `horizon`.
    static WindowConfig for_horizon(int horizon);
};

struct WindowRecord {
    Vector input;
    Vector output;
};

/// Flags that drive the final rounding/clamping of forecasts.
struct OutputFlags {
    bool is_count_data = false;
    bool non_negative = false;
};

std::pair<Vector, double> mean_scale(const Vector& values);
Vector inverse_scale(const Vector& scaled, double mean_factor);

/// log(v) when the dataset minimum is positive, log(v + 1) when it is zero.
std::pair<Vector, bool> log_stabilise(const Vector& values, double dataset_min);

/// sin/cos pairs for every period and harmonic at 1-based time index t.
Vector fourier_terms(int t, const FourierConfig& config);

/// All stride-1 windows that fit completely, oldest first (T - n - m + 1 records).
std::vector<WindowRecord> make_windows(const Vector& values, const WindowConfig& config);

/// exp -> minus one -> times mean factor -> round (count data) -> clamp at zero.
Vector postprocess(const Vector& raw, const ScalingRecord& record, const OutputFlags& flags);

/// Round/clamp only; used for forecasts that are already on the original scale.
Vector apply_output_flags(Vector forecasts, const OutputFlags& flags);

}  // namespace lomef
