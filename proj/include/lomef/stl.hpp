#pragma once

#include <vector>

#include "lomef/core.hpp"

namespace lomef {

/// Additive decomposition y = trend + sum(seasonal) + remainder. The remainder
/// is defined as the difference, so the identity holds by construction.
struct STLComponents {
    Vector trend;
    std::vector<Vector> seasonal;
    std::vector<int> periods;
    Vector remainder;

    Vector seasonal_sum() const;
    /// trend + seasonal_sum(), i.e. the series without its remainder.
    Vector signal() const;
};

struct StlOptions {
    /// Loess span for the trend (0 = next odd integer >= 1.5 * period).
    int trend_span = 0;
    int inner_iterations = 2;
};

/// Degree-1 loess with tricube weights over the `span` nearest neighbours.
Vector loess_smooth(const Vector& values, int span);

/// Single-period STL with a periodic seasonal (sub-series means of the
/// detrended series) and a loess trend.
STLComponents stl_decompose(const Vector& values, int period, const StlOptions& options = {});

/// Multiple seasonal periods, shortest first, two refinement passes. An empty
/// period list gives a trend-only decomposition.
STLComponents mstl_decompose(const Vector& values, std::vector<int> periods,
                             const StlOptions& options = {});

/// Default trend span: next odd integer >= 1.5 * period; for non-seasonal
/// series floor(T / 4) made odd.
int default_trend_span(int period, Eigen::Index length);

}  // namespace lomef
