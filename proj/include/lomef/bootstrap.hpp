#pragma once

#include <vector>

#include "lomef/core.hpp"

namespace lomef {

/// Moving block bootstrap: floor(T/l) + 2 blocks of l consecutive values at
/// uniform start positions, concatenated, a uniform offset in [0, l) dropped
/// from the front, truncated to T.
Vector mbb(const Vector& values, int block_len, Rng& rng);

/// Default block length: 2 * largest period (8 when non-seasonal), capped at T/2.
int default_block_length(const std::vector<int>& seasonal_periods, Eigen::Index length);

/// Autoregression used by the sieve bootstrap.
struct SieveModel {
    int order = 1;
    Vector coefficients;  ///< phi_1 .. phi_p (most recent lag first)
    double intercept = 0.0;
    Vector residuals;     ///< y_t - fitted, for t = p .. T-1 (length T - p)
};

/// OLS AR(p) with intercept at a fixed order.
SieveModel fit_sieve_order(const Vector& values, int order);
/// Order chosen by AIC within 1..max_order on a common estimation sample.
SieveModel fit_sieve(const Vector& values, int max_order);

/// Runs the AR recursion forward from values[0..p) with the given residuals
/// injected. Throws UnstableSieve when the path exceeds 1e6 x the series scale.
Vector sieve_regenerate(const Vector& values, const SieveModel& model, const Vector& residuals);

}  // namespace lomef
