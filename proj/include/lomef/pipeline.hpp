#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lomef/config.hpp"
#include "lomef/evaluation.hpp"
#include "lomef/explainers.hpp"
#include "lomef/gfm.hpp"
#include "lomef/neighbourhood.hpp"

namespace lomef {

/// One explainer fitted on one neighbourhood of one series.
struct ExplainerOutcome {
    ExplainerKind kind = ExplainerKind::ETS;
    NeighbourhoodMethod method = NeighbourhoodMethod::NF;
    Vector local_forecast;
    FittedExplainer explainer;
    int members = 0;
    int block_length = 0;
    /// Mean of the member fits (what the explainers were trained on).
    Vector neighbourhood_mean;
};

struct SeriesResult {
    std::string id;
    std::vector<int> periods;
    int input_length = 0;
    Vector train;
    Vector test;
    Vector global_forecast;
    std::vector<ExplainerOutcome> outcomes;
    std::vector<EvaluationRecord> records;
    std::vector<std::string> errors;
};

struct RunResult {
    std::string gfm;
    double significance_level = 0.0;
    std::vector<SeriesResult> series;
    std::vector<EvaluationRecord> records;
    std::vector<AggregateRow> aggregate;
    std::vector<std::string> errors;
};

/// Training part of every series (the held-out horizon removed).
SeriesSet training_set(const SeriesSet& data);

/// Applies the config's horizon override to a loaded set.
SeriesSet with_horizon(SeriesSet data, int horizon);

/// Builds and trains the configured global model on the training set. The
/// full set is only used by the oracle stub.
std::unique_ptr<GlobalModel> build_global_model(const RunConfig& config, const SeriesSet& data);

/// Worker count: config.threads, else LOMEF_THREADS, else 1.
int resolve_threads(const RunConfig& config);

/// The full framework for every series: split, global forecast, neighbourhood,
/// explainers, local benchmarks, evaluation records, aggregation and
/// significance tests. Series that fail are logged and skipped.
RunResult run_pipeline(const RunConfig& config, const SeriesSet& data);
RunResult run_pipeline(const RunConfig& config, const SeriesSet& data, const GlobalModel& model);

struct StabilityRow {
    ExplainerKind explainer = ExplainerKind::ETS;
    NeighbourhoodMethod method = NeighbourhoodMethod::NF;
    MetricKind metric = MetricKind::RMSE;
    /// Median over series of Error(global, explainer), one entry per run.
    std::vector<double> run_medians;
    double iqr = 0.0;
};

struct StabilityResult {
    std::vector<StabilityRow> rows;
    std::vector<std::string> errors;
};

/// `runs` independent runs that differ only in the neighbourhood seed; the
/// global model is trained once.
StabilityResult run_stability(const RunConfig& config, const SeriesSet& data, int runs);

}  // namespace lomef
