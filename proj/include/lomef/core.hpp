#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lomef/errors.hpp"
#include "lomef/rng.hpp"

namespace lomef {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One univariate series. `values` holds the full observed history including
/// the held-out horizon.
struct TimeSeries {
    std::string id;
    Vector values;
    std::vector<int> seasonal_periods;
    int horizon = 1;
    bool is_count_data = false;
    bool non_negative = false;

    Eigen::Index length() const { return values.size(); }
    /// Largest declared seasonal period, or 1 when non-seasonal.
    int max_period() const;
};

struct SeriesSet {
    std::string name;
    std::vector<TimeSeries> series;
};

struct SplitSeries {
    Vector train;
    Vector test;
};

struct Violation {
    std::string series_id;
    std::string rule;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Held-out split: the last `horizon` values become the test part.
SplitSeries split(const TimeSeries& series);

/// Checks every TimeSeries/SeriesSet invariant and reports each failure.
std::vector<Violation> validate(const SeriesSet& set);

std::vector<double> to_std(const Vector& v);
Vector from_std(const std::vector<double>& v);

}  // namespace lomef
