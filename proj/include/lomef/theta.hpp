#pragma once

#include <optional>

#include "lomef/core.hpp"

namespace lomef {

/// Simple exponential smoothing with drift equal to half the OLS trend slope,
/// on a classically seasonally adjusted series when seasonality is detected.
struct ThetaModel {
    double ses_alpha = 0.0;
    double level = 0.0;
    double slope = 0.0;
    double drift = 0.0;
    int period = 0;
    bool seasonally_adjusted = false;
    Vector seasonal_indices;  ///< additive, sums to zero, indexed by t mod period
    Eigen::Index n_obs = 0;
};

ThetaModel fit_theta(const Vector& values, std::optional<int> seasonal_period);

Vector forecast(const ThetaModel& model, int horizon);

/// Sample autocorrelation at `lag`.
double autocorrelation(const Vector& values, int lag);

/// Classical additive decomposition indices (centred moving average trend).
Vector classical_seasonal_indices(const Vector& values, int period);

}  // namespace lomef
