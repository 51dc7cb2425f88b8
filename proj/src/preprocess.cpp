#include "lomef/preprocess.hpp"

#include <cmath>
#include <numbers>

namespace lomef {

int FourierConfig::n_terms() const {
    int total = 0;
    for (int k : harmonics) total += 2 * k;
    return total;
}

void FourierConfig::check() const {
    if (periods.size() != harmonics.size()) {
        fail(ErrorKind::InvalidArgument, "Fourier config needs one K per period");
    }
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (harmonics[i] < 1 || harmonics[i] > 25) {
            fail(ErrorKind::InvalidArgument, "Fourier K must lie in 1..25");
        }
        if (2 * harmonics[i] > periods[i]) {
            fail(ErrorKind::InvalidArgument,
                 "Fourier K=" + std::to_string(harmonics[i]) + " aliases for period " +
                     std::to_string(periods[i]));
        }
    }
}

WindowConfig WindowConfig::for_horizon(int horizon) {
    return {int(std::ceil(1.5 * double(horizon))), horizon};
}

std::pair<Vector, double> mean_scale(const Vector& values) {
    if (values.size() == 0) fail(ErrorKind::InvalidArgument, "mean_scale of an empty series");
    const double m = values.mean();
    if (m == 0.0) fail(ErrorKind::ZeroMean, "series mean is zero");
    return {values / m, m};
}

Vector inverse_scale(const Vector& scaled, double mean_factor) { return scaled * mean_factor; }

std::pair<Vector, bool> log_stabilise(const Vector& values, double dataset_min) {
    if (dataset_min < 0.0 || (values.size() > 0 && values.minCoeff() < 0.0)) {
        fail(ErrorKind::NegativeValue, "log transform needs non-negative data");
    }
    const bool plus_one = dataset_min == 0.0;
    Vector out = plus_one ? Vector(values.array().log1p()) : Vector(values.array().log());
    return {out, plus_one};
}

Vector fourier_terms(int t, const FourierConfig& config) {
    Vector out(config.n_terms());
    Eigen::Index j = 0;
    for (std::size_t p = 0; p < config.periods.size(); ++p) {
        const double s = config.periods[p];
        for (int k = 1; k <= config.harmonics[p]; ++k) {
            const double angle = 2.0 * std::numbers::pi * double(k) * double(t) / s;
            out(j++) = std::sin(angle);
            out(j++) = std::cos(angle);
        }
    }
    return out;
}

std::vector<WindowRecord> make_windows(const Vector& values, const WindowConfig& config) {
    const Eigen::Index n = config.input_len;
    const Eigen::Index m = config.output_len;
    if (n < 1 || m < 1) fail(ErrorKind::InvalidArgument, "window lengths must be positive");
    const Eigen::Index T = values.size();
    if (T < n + m) {
        fail(ErrorKind::SeriesTooShort, "series of length " + std::to_string(T) +
                                            " cannot hold a window of " + std::to_string(n + m));
    }
    std::vector<WindowRecord> records;
    records.reserve(std::size_t(T - n - m + 1));
    for (Eigen::Index start = 0; start + n + m <= T; ++start) {
        records.push_back({values.segment(start, n), values.segment(start + n, m)});
    }
    return records;
}

Vector apply_output_flags(Vector forecasts, const OutputFlags& flags) {
    for (auto& v : forecasts) {
        if (flags.is_count_data) v = std::round(v);  // half away from zero
        if (flags.non_negative && v < 0.0) v = 0.0;
    }
    return forecasts;
}

Vector postprocess(const Vector& raw, const ScalingRecord& record, const OutputFlags& flags) {
    if (!raw.allFinite()) fail(ErrorKind::NonFiniteForecast, "raw forecasts are not finite");
    Vector out = raw;
    if (record.log_applied) {
        out = out.array().exp();
        if (record.plus_one_applied) out.array() -= 1.0;
    }
    out *= record.mean_factor;
    if (!out.allFinite()) fail(ErrorKind::NonFiniteForecast, "forecast overflowed on inversion");
    return apply_output_flags(std::move(out), flags);
}

}  // namespace lomef
