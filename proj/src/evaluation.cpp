#include "lomef/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "lomef/stats.hpp"

namespace lomef {

std::string_view to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::MASE: return "MASE";
        case MetricKind::RMSE: return "RMSE";
        case MetricKind::MAE: return "MAE";
    }
    return "?";
}

double mase_denominator(const Vector& train, int season) {
    const Eigen::Index S = std::max(1, season);
    const Eigen::Index M = train.size();
    if (M <= S) {
        fail(ErrorKind::SeriesTooShort, "MASE needs a training series longer than its season");
    }
    const double denom = (train.tail(M - S) - train.head(M - S)).cwiseAbs().mean();
    if (!(denom > 0.0)) {
        fail(ErrorKind::ZeroDenominator, "seasonal-naive in-sample error is zero");
    }
    return denom;
}

double metric(MetricKind kind, const Vector& actual, const Vector& forecast, const Vector& train,
              int season) {
    if (actual.size() != forecast.size()) {
        fail(ErrorKind::LengthMismatch, "actual and forecast lengths differ");
    }
    if (actual.size() == 0) fail(ErrorKind::LengthMismatch, "empty forecast");
    switch (kind) {
        case MetricKind::MASE:
            return mean_absolute_error(actual, forecast) / mase_denominator(train, season);
        case MetricKind::RMSE: return root_mean_squared_error(actual, forecast);
        case MetricKind::MAE: return mean_absolute_error(actual, forecast);
    }
    return 0.0;
}

PrimaryErrors primary_errors(MetricKind kind, const Vector& actual, const Vector& global_fc,
                             const Vector& local_fc, const Vector& explainer_fc,
                             const Vector& train, int season) {
    auto e = [&](const Vector& reference, const Vector& other) {
        return metric(kind, reference, other, train, season);
    };
    PrimaryErrors p;
    p.global_explainer = e(global_fc, explainer_fc);
    p.actual_global = e(actual, global_fc);
    p.actual_local = e(actual, local_fc);
    p.global_local = e(global_fc, local_fc);
    p.actual_explainer = e(actual, explainer_fc);
    p.local_explainer = e(local_fc, explainer_fc);
    return p;
}

std::array<double, 6> SecondaryMeasures::as_array() const {
    return {fidelity_actual,        fidelity_local,           fidelity_with_explainer,
            acc_global_localmodel,  acc_explainer_localmodel, acc_explainer_globalmodel};
}

SecondaryMeasures secondary_measures(const PrimaryErrors& p) {
    SecondaryMeasures s;
    s.fidelity_actual = p.global_explainer - p.actual_global;
    s.fidelity_local = p.global_explainer - p.global_local;
    s.fidelity_with_explainer = p.global_explainer - p.local_explainer;
    s.acc_global_localmodel = p.actual_global - p.actual_local;
    s.acc_explainer_localmodel = p.actual_explainer - p.actual_local;
    // (explainer - local) - (global - local), so the identity between the three
    // accuracy measures holds bit-for-bit
    s.acc_explainer_globalmodel = s.acc_explainer_localmodel - s.acc_global_localmodel;
    return s;
}

TTestResult t_test_less_than_zero(const std::vector<double>& samples) {
    if (samples.size() < 2) fail(ErrorKind::DegenerateSample, "t-test needs at least two samples");
    const double sd = sample_sd(samples);
    if (!(sd > 0.0)) fail(ErrorKind::DegenerateSample, "t-test sample has zero variance");
    TTestResult r;
    r.dof = double(samples.size() - 1);
    r.t = mean(samples) / (sd / std::sqrt(double(samples.size())));
    r.p = student_t_cdf(r.t, r.dof);
    return r;
}

double bonferroni(double alpha, int m_tests) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    if (m_tests < 1) fail(ErrorKind::InvalidArgument, "Bonferroni needs m >= 1");
    return alpha / double(m_tests);
}

std::vector<AggregateRow> aggregate(const std::vector<EvaluationRecord>& records,
                                    double significance_level) {
    using Key = std::tuple<int, int, int>;
    std::map<Key, std::array<std::vector<double>, 6>> groups;
    for (const auto& r : records) {
        auto& g = groups[Key{int(r.explainer), int(r.method), int(r.metric)}];
        const auto values = r.secondary.as_array();
        for (std::size_t i = 0; i < 6; ++i) g[i].push_back(values[i]);
    }

    std::vector<AggregateRow> rows;
    for (const auto& [key, measures] : groups) {
        if (measures[0].empty()) fail(ErrorKind::EmptyGroup, "aggregation group without records");
        AggregateRow mean_row;
        mean_row.explainer = ExplainerKind(std::get<0>(key));
        mean_row.method = NeighbourhoodMethod(std::get<1>(key));
        mean_row.metric = MetricKind(std::get<2>(key));
        mean_row.n = measures[0].size();
        AggregateRow median_row = mean_row;
        mean_row.statistic = "mean";
        median_row.statistic = "median";
        for (std::size_t i = 0; i < 6; ++i) {
            mean_row.values[i] = mean(measures[i]);
            median_row.values[i] = median(measures[i]);
            double p = std::numeric_limits<double>::quiet_NaN();
            try {
                p = t_test_less_than_zero(measures[i]).p;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateSample) throw;
            }
            const bool sig = p < significance_level;
            mean_row.p_values[i] = median_row.p_values[i] = p;
            mean_row.significant[i] = median_row.significant[i] = sig;
        }
        rows.push_back(std::move(mean_row));
        rows.push_back(std::move(median_row));
    }
    return rows;
}

double stability_iqr(const std::vector<double>& run_values) {
    if (run_values.size() < 2) fail(ErrorKind::TooFewRuns, "stability needs at least two runs");
    return quantile(run_values, 0.75) - quantile(run_values, 0.25);
}

}  // namespace lomef
