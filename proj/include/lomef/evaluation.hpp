#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "lomef/core.hpp"
#include "lomef/explainers.hpp"
#include "lomef/neighbourhood.hpp"

namespace lomef {

enum class MetricKind { MASE, RMSE, MAE };

std::string_view to_string(MetricKind kind);
inline constexpr std::array<MetricKind, 3> kAllMetrics{MetricKind::MASE, MetricKind::RMSE,
                                                       MetricKind::MAE};

template <typename DA, typename DF>
double mean_absolute_error(const Eigen::MatrixBase<DA>& actual, const Eigen::MatrixBase<DF>& forecast) {
    return (forecast - actual).cwiseAbs().mean();
}

template <typename DA, typename DF>
double root_mean_squared_error(const Eigen::MatrixBase<DA>& actual,
                               const Eigen::MatrixBase<DF>& forecast) {
    return std::sqrt((forecast - actual).squaredNorm() / double(actual.size()));
}

/// In-sample seasonal-naive MAE: (1/(M-S)) sum_{t=S+1}^{M} |y_t - y_{t-S}|.
double mase_denominator(const Vector& train, int season);

/// MASE / RMSE / MAE of `forecast` against `actual`. `train` and `season` are
/// only used by MASE (season = largest period, 1 when non-seasonal).
double metric(MetricKind kind, const Vector& actual, const Vector& forecast, const Vector& train,
              int season);

/// Pairwise errors among actuals and the three forecasts. The first argument
/// of each pair is the reference.
struct PrimaryErrors {
    double global_explainer = 0.0;
    double actual_global = 0.0;
    double actual_local = 0.0;
    double global_local = 0.0;
    double actual_explainer = 0.0;
    double local_explainer = 0.0;
};

PrimaryErrors primary_errors(MetricKind kind, const Vector& actual, const Vector& global_fc,
                             const Vector& local_fc, const Vector& explainer_fc,
                             const Vector& train, int season);

struct SecondaryMeasures {
    double fidelity_actual = 0.0;
    double fidelity_local = 0.0;
    double fidelity_with_explainer = 0.0;
    double acc_global_localmodel = 0.0;
    double acc_explainer_localmodel = 0.0;
    double acc_explainer_globalmodel = 0.0;

    std::array<double, 6> as_array() const;
};

inline constexpr std::array<std::string_view, 6> kMeasureNames{
    "Fidelity_Actual",        "Fidelity_Local",           "Fidelity_with_Explainer",
    "Acc_Global_LocalModel",  "Acc_Explainer_LocalModel", "Acc_Explainer_GlobalModel"};

SecondaryMeasures secondary_measures(const PrimaryErrors& p);

struct EvaluationRecord {
    std::string series_id;
    ExplainerKind explainer = ExplainerKind::ETS;
    NeighbourhoodMethod method = NeighbourhoodMethod::NF;
    MetricKind metric = MetricKind::RMSE;
    PrimaryErrors primary;
    SecondaryMeasures secondary;
};

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double dof = 0.0;
};

/// One-sided one-sample t-test of H1: mean < 0.
TTestResult t_test_less_than_zero(const std::vector<double>& samples);

double bonferroni(double alpha, int m_tests);

struct AggregateRow {
    ExplainerKind explainer = ExplainerKind::ETS;
    NeighbourhoodMethod method = NeighbourhoodMethod::NF;
    MetricKind metric = MetricKind::RMSE;
    std::string statistic;  ///< "mean" or "median"
    std::size_t n = 0;
    std::array<double, 6> values{};
    std::array<double, 6> p_values{};
    std::array<bool, 6> significant{};
};

/// Mean and median rows per (explainer, method, metric), ordered by those
/// keys. Each measure is also t-tested against zero; a measure is flagged
/// significant when its p value is below `significance_level`.
std::vector<AggregateRow> aggregate(const std::vector<EvaluationRecord>& records,
                                    double significance_level);

/// Q3 - Q1 (type 7) of the explainer-to-global errors across runs.
double stability_iqr(const std::vector<double>& run_values);

}  // namespace lomef
