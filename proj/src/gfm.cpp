#include "lomef/gfm.hpp"

#include <limits>

namespace lomef {

Vector one_step_fit(const GlobalModel& model, const TimeSeries& series) {
    const SplitSeries parts = split(series);
    if (parts.train.size() <= model.input_length()) {
        fail(ErrorKind::SeriesTooShort, "series " + series.id + " is not longer than the input window");
    }
    return model.one_step_fit(parts.train);
}

Vector forecast(const GlobalModel& model, const TimeSeries& series, int horizon) {
    const SplitSeries parts = split(series);
    if (parts.train.size() < model.input_length()) {
        fail(ErrorKind::SeriesTooShort, "series " + series.id + " is shorter than the input window");
    }
    return model.forecast(parts.train, horizon);
}

DatasetTransform DatasetTransform::fit(const SeriesSet& set, const PreprocessOptions& options) {
    OutputFlags flags{true, true};
    double dataset_min = std::numeric_limits<double>::infinity();
    for (const auto& s : set.series) {
        flags.is_count_data = flags.is_count_data && s.is_count_data;
        flags.non_negative = flags.non_negative && s.non_negative;
        if (s.values.size() > 0) dataset_min = std::min(dataset_min, s.values.minCoeff());
    }
    if (set.series.empty()) flags = {};
    bool plus_one = false;
    if (options.log_transform) {
        if (dataset_min < 0.0) {
            fail(ErrorKind::NegativeValue, "log transform requested on a dataset with negative values");
        }
        plus_one = dataset_min == 0.0;
    }
    return DatasetTransform(options, plus_one, flags);
}

std::pair<Vector, ScalingRecord> DatasetTransform::forward(const Vector& values) const {
    ScalingRecord record;
    Vector out = values;
    if (options_.mean_scale) {
        const double m = values.mean();
        if (!(m > 0.0)) fail(ErrorKind::ZeroMean, "mean scaling needs a positive series mean");
        out /= m;
        record.mean_factor = m;
    }
    if (options_.log_transform) {
        if (out.minCoeff() < 0.0 || (!plus_one_ && out.minCoeff() == 0.0)) {
            fail(ErrorKind::NegativeValue, "value outside the domain of the dataset's log transform");
        }
        out = plus_one_ ? Vector(out.array().log1p()) : Vector(out.array().log());
        record.log_applied = true;
        record.plus_one_applied = plus_one_;
    }
    return {std::move(out), record};
}

Vector DatasetTransform::inverse(const Vector& raw, const ScalingRecord& record) const {
    return postprocess(raw, record, flags_);
}

Vector OracleStubModel::forecast(const Vector& history, int horizon) const {
    const Eigen::Index n = history.size();
    for (const auto& s : full_.series) {
        if (s.values.size() >= n + horizon && s.values.head(n) == history) {
            return s.values.segment(n, horizon);
        }
    }
    return Vector::Constant(horizon, n > 0 ? history(n - 1) : 0.0);
}

Vector OracleStubModel::one_step_fit(const Vector& values) const {
    if (values.size() <= input_length_) {
        fail(ErrorKind::SeriesTooShort, "series is not longer than the input window");
    }
    return values.tail(values.size() - input_length_);
}

}  // namespace lomef
