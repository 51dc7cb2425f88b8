#include "lomef/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <thread>

#include "lomef/external_model.hpp"
#include "lomef/log.hpp"
#include "lomef/stats.hpp"

namespace lomef {

SeriesSet training_set(const SeriesSet& data) {
    SeriesSet out;
    out.name = data.name;
    out.series.reserve(data.series.size());
    for (const auto& s : data.series) {
        TimeSeries t = s;
        t.values = split(s).train;
        out.series.push_back(std::move(t));
    }
    return out;
}

SeriesSet with_horizon(SeriesSet data, int horizon) {
    if (horizon > 0) {
        for (auto& s : data.series) s.horizon = horizon;
    }
    return data;
}

namespace {

int dataset_horizon(const SeriesSet& data) {
    if (data.series.empty()) fail(ErrorKind::ValidationError, "dataset contains no series");
    return data.series.front().horizon;
}

std::optional<FourierConfig> gfm_fourier(const RunConfig& config, const SeriesSet& data) {
    if (!config.gfm_fourier || data.series.empty()) return std::nullopt;
    FourierConfig f;
    for (int p : data.series.front().seasonal_periods) {
        f.periods.push_back(p);
        f.harmonics.push_back(std::max(1, std::min(config.gfm_fourier_k, p / 2)));
    }
    if (f.periods.empty()) return std::nullopt;
    return f;
}

OutputFlags dataset_flags(const SeriesSet& data) {
    OutputFlags flags{true, true};
    for (const auto& s : data.series) {
        flags.is_count_data = flags.is_count_data && s.is_count_data;
        flags.non_negative = flags.non_negative && s.non_negative;
    }
    return flags;
}

}  // namespace

std::unique_ptr<GlobalModel> build_global_model(const RunConfig& config, const SeriesSet& data) {
    const int h = dataset_horizon(data);
    const WindowConfig window = WindowConfig::for_horizon(h);
    const PreprocessOptions preprocess{config.mean_scale, config.log_transform};
    switch (config.gfm) {
        case GfmKind::PooledAR:
            return std::make_unique<PooledARModel>(
                fit_pooled_ar(training_set(data), window, gfm_fourier(config, data), preprocess));
        case GfmKind::MLP: {
            MlpOptions options;
            options.preprocess = preprocess;
            return std::make_unique<GlobalMLPModel>(fit_global_mlp(
                training_set(data), window, config.mlp_hidden, config.mlp_epochs,
                derive_seed(RngSeed{config.seed}, 0xA11CE), options));
        }
        case GfmKind::External: {
            ExternalProcessModel::Options options;
            options.input_length =
                config.external_input_length > 0 ? config.external_input_length : window.input_len;
            options.timeout = std::chrono::milliseconds(config.external_timeout_ms);
            options.flags = dataset_flags(data);
            return std::make_unique<ExternalProcessModel>(config.external_command, options);
        }
        case GfmKind::OracleStub:
            return std::make_unique<OracleStubModel>(data, window.input_len);
    }
    fail(ErrorKind::InvalidArgument, "unknown global model kind");
}

int resolve_threads(const RunConfig& config) {
    if (config.threads > 0) return config.threads;
    if (const char* env = std::getenv("LOMEF_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
        log::warn("ignoring invalid LOMEF_THREADS value");
    }
    return 1;
}

namespace {

Vector member_mean(const std::vector<Vector>& members) {
    Vector sum = Vector::Zero(members.front().size());
    for (const auto& m : members) sum += m;
    return sum / double(members.size());
}

std::string describe(const std::string& id, std::string_view what, const Error& e) {
    return id + ": " + std::string(what) + ": " + std::string(to_string(e.kind())) + ": " + e.what();
}

// Two seasonal cycles of lags let the sieve AR carry the seasonal pattern
// through the regenerated paths.
int sieve_order_max(const RunConfig& config, const TimeSeries& series, int input_length) {
    if (config.sieve_order_max > 0) return config.sieve_order_max;
    return std::max(input_length, 2 * series.max_period());
}

SeriesResult process_series(const RunConfig& config, const TimeSeries& series,
                            const GlobalModel& model, RngSeed seed) {
    SeriesResult r;
    r.id = series.id;
    r.periods = series.seasonal_periods;
    r.input_length = model.input_length();
    const SplitSeries parts = split(series);
    r.train = parts.train;
    r.test = parts.test;
    const int h = series.horizon;
    const int n = model.input_length();
    if (r.train.size() <= n + 1) {
        fail(ErrorKind::SeriesTooShort, "training region not longer than the input window");
    }

    r.global_forecast = model.forecast(r.train, h);
    if (r.global_forecast.size() != h || !r.global_forecast.allFinite()) {
        fail(ErrorKind::NonFiniteForecast, "global model forecast is not finite");
    }

    ExplainerContext ctx;
    ctx.periods = series.seasonal_periods;
    ctx.horizon = h;
    ctx.lags = n;
    ctx.time_origin = n + 1;
    ctx.flags = {series.is_count_data, series.non_negative};
    const Vector local_values = r.train.tail(r.train.size() - n);
    const int season = series.max_period();

    std::map<ExplainerKind, FittedExplainer> local_cache;
    for (NeighbourhoodMethod method : config.methods) {
        std::optional<Neighbourhood> hood;
        try {
            BootstrapOptions bo;
            bo.members = config.members_for(method);
            bo.block_length = config.block_length;
            bo.seed = seed;
            switch (method) {
                case NeighbourhoodMethod::NF: hood = nf_neighbourhood(model, series); break;
                case NeighbourhoodMethod::NSTL: hood = nstl_neighbourhood(model, series, bo); break;
                case NeighbourhoodMethod::NSIEVE:
                    hood = nsieve_neighbourhood(model, series, sieve_order_max(config, series, n), bo);
                    break;
            }
        } catch (const Error& e) {
            r.errors.push_back(describe(series.id, to_string(method), e));
            continue;
        }

        for (ExplainerKind kind : config.explainers) {
            const std::string what = std::string(to_string(method)) + "/" + std::string(to_string(kind));
            if (!explainer_supported(kind, ctx, local_values.size(), hood->size())) {
                r.errors.push_back(series.id + ": " + what + ": not applicable to this neighbourhood");
                continue;
            }
            try {
                auto cached = local_cache.find(kind);
                if (cached == local_cache.end()) {
                    cached = local_cache.emplace(kind, fit_local_model(kind, local_values, ctx)).first;
                }
                ExplainerOutcome outcome;
                outcome.kind = kind;
                outcome.method = method;
                outcome.local_forecast = cached->second.forecast;
                outcome.explainer = fit_explainer(kind, hood->member_fits, ctx);
                outcome.members = int(hood->size());
                outcome.block_length = hood->block_length;
                outcome.neighbourhood_mean = member_mean(hood->member_fits);

                std::vector<EvaluationRecord> records;
                for (MetricKind metric_kind : kAllMetrics) {
                    EvaluationRecord rec;
                    rec.series_id = series.id;
                    rec.explainer = kind;
                    rec.method = method;
                    rec.metric = metric_kind;
                    rec.primary = primary_errors(metric_kind, r.test, r.global_forecast,
                                                 outcome.local_forecast, outcome.explainer.forecast,
                                                 r.train, season);
                    rec.secondary = secondary_measures(rec.primary);
                    records.push_back(rec);
                }
                r.records.insert(r.records.end(), records.begin(), records.end());
                r.outcomes.push_back(std::move(outcome));
            } catch (const Error& e) {
                r.errors.push_back(describe(series.id, what, e));
            }
        }
    }
    return r;
}

template <typename Job>
void parallel_for(std::size_t count, int threads, Job&& job) {
    const int workers = std::max(1, std::min<int>(threads, int(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

RunResult run_pipeline(const RunConfig& config, const SeriesSet& data, const GlobalModel& model) {
    config.check();
    RunResult result;
    result.gfm = model.name();
    const int m = config.bonferroni_tests > 0
                      ? config.bonferroni_tests
                      : int(config.explainers.size() * config.methods.size() * kMeasureNames.size());
    result.significance_level = bonferroni(config.alpha, m);

    std::vector<SeriesResult> slots(data.series.size());
    parallel_for(data.series.size(), resolve_threads(config), [&](std::size_t i) {
        const TimeSeries& s = data.series[i];
        try {
            slots[i] = process_series(config, s, model, derive_seed(RngSeed{config.seed}, i));
        } catch (const Error& e) {
            slots[i].id = s.id;
            slots[i].errors.push_back(describe(s.id, "series", e));
        }
    });

    for (auto& s : slots) {
        result.records.insert(result.records.end(), s.records.begin(), s.records.end());
        result.errors.insert(result.errors.end(), s.errors.begin(), s.errors.end());
    }
    result.series = std::move(slots);
    result.aggregate = aggregate(result.records, result.significance_level);
    return result;
}

RunResult run_pipeline(const RunConfig& config, const SeriesSet& data) {
    config.check();
    const SeriesSet prepared = with_horizon(data, config.horizon);
    const auto model = build_global_model(config, prepared);
    return run_pipeline(config, prepared, *model);
}

StabilityResult run_stability(const RunConfig& config, const SeriesSet& data, int runs) {
    if (runs < 2) fail(ErrorKind::TooFewRuns, "stability needs at least two runs");
    config.check();
    const SeriesSet prepared = with_horizon(data, config.horizon);
    const auto model = build_global_model(config, prepared);

    StabilityResult out;
    std::map<std::tuple<int, int, int>, std::size_t> index;
    for (ExplainerKind kind : config.explainers) {
        for (NeighbourhoodMethod method : config.methods) {
            for (MetricKind metric_kind : kAllMetrics) {
                index[{int(kind), int(method), int(metric_kind)}] = out.rows.size();
                out.rows.push_back({kind, method, metric_kind, {}, 0.0});
            }
        }
    }

    for (int run = 0; run < runs; ++run) {
        RunConfig cfg = config;
        cfg.seed = derive_seed(RngSeed{config.seed}, 0x5EED0000ULL + std::uint64_t(run)).value;
        const RunResult result = run_pipeline(cfg, prepared, *model);
        for (const auto& e : result.errors) out.errors.push_back("run " + std::to_string(run + 1) + ": " + e);

        std::map<std::size_t, std::vector<double>> per_row;
        for (const auto& rec : result.records) {
            per_row[index.at({int(rec.explainer), int(rec.method), int(rec.metric)})].push_back(
                rec.primary.global_explainer);
        }
        for (std::size_t i = 0; i < out.rows.size(); ++i) {
            auto it = per_row.find(i);
            out.rows[i].run_medians.push_back(
                it == per_row.end() ? std::nan("") : median(it->second));
        }
    }
    for (auto& row : out.rows) row.iqr = stability_iqr(row.run_medians);
    return out;
}

}  // namespace lomef
