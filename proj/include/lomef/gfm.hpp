#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lomef/core.hpp"
#include "lomef/preprocess.hpp"

namespace lomef {

/// Black-box global forecaster. Implementations take and return values on the
/// original scale; any internal normalisation is their own business.
class GlobalModel {
  public:
    virtual ~GlobalModel() = default;

    /// Length n of the input window the model conditions on.
    virtual int input_length() const = 0;

    /// h forecasts following the end of `history`.
    virtual Vector forecast(const Vector& history, int horizon) const = 0;

    /// One-step-ahead in-sample fit: element i predicts values[n + i] from the
    /// window values[i .. n + i - 1]. Length is values.size() - n.
    virtual Vector one_step_fit(const Vector& values) const = 0;

    virtual std::string name() const = 0;
};

/// Fit of the series' training region (everything before the held-out horizon).
Vector one_step_fit(const GlobalModel& model, const TimeSeries& series);
/// Forecast of h values from the series' training region.
Vector forecast(const GlobalModel& model, const TimeSeries& series, int horizon);

struct PreprocessOptions {
    bool mean_scale = true;
    bool log_transform = true;
};

/// Dataset-wide preprocessing: mean scaling per series, log/log1p chosen once
/// from the minimum over all series, and the output flags for post-processing.
class DatasetTransform {
  public:
    DatasetTransform() = default;
    DatasetTransform(PreprocessOptions options, bool plus_one, OutputFlags flags)
        : options_(options), plus_one_(plus_one), flags_(flags) {}

    static DatasetTransform fit(const SeriesSet& set, const PreprocessOptions& options);

    /// Transformed values plus the record needed to invert them.
    std::pair<Vector, ScalingRecord> forward(const Vector& values) const;
    Vector inverse(const Vector& raw, const ScalingRecord& record) const;

    const PreprocessOptions& options() const { return options_; }
    bool plus_one() const { return plus_one_; }
    const OutputFlags& flags() const { return flags_; }

  private:
    PreprocessOptions options_;
    bool plus_one_ = false;
    OutputFlags flags_;
};

/// Linear autoregression shared by all series, fitted on preprocessed values.
/// Multi-step forecasts are recursive.
class PooledARModel final : public GlobalModel {
  public:
    PooledARModel(DatasetTransform transform, int lag_order, Vector coefficients,
                  double intercept, std::optional<FourierConfig> fourier,
                  Vector fourier_coefficients, bool ridge_fallback);

    int input_length() const override { return lag_order_; }
    Vector forecast(const Vector& history, int horizon) const override;
    Vector one_step_fit(const Vector& values) const override;
    std::string name() const override { return "pooled_ar"; }

    /// Lag coefficients, most recent lag first.
    const Vector& coefficients() const { return coefficients_; }
    double intercept() const { return intercept_; }
    const Vector& fourier_coefficients() const { return fourier_coefficients_; }
    bool ridge_fallback() const { return ridge_fallback_; }
    const DatasetTransform& transform() const { return transform_; }

    /// The model's one-step map on the transformed scale. `window` is the last n
    /// transformed values (oldest first); `t` is the 1-based time index predicted.
    double step(const Vector& window, int t) const;

  private:
    DatasetTransform transform_;
    int lag_order_;
    Vector coefficients_;
    double intercept_;
    std::optional<FourierConfig> fourier_;
    Vector fourier_coefficients_;
    bool ridge_fallback_;
};

PooledARModel fit_pooled_ar(const SeriesSet& set, const WindowConfig& window,
                            const std::optional<FourierConfig>& fourier,
                            const PreprocessOptions& preprocess = {});

struct MlpOptions {
    int batch_size = 32;
    double learning_rate = 3e-3;
    /// Full-data loss is recorded every `checkpoint_every` epochs (0 = auto).
    int checkpoint_every = 0;
    PreprocessOptions preprocess;
};

/// One-hidden-layer tanh network mapping an input window to the whole output
/// window (MIMO). Windows are expressed relative to their last input value.
class GlobalMLPModel final : public GlobalModel {
  public:
    GlobalMLPModel(DatasetTransform transform, WindowConfig window, Matrix w1, Vector b1,
                   Matrix w2, Vector b2, std::vector<double> loss_history);

    int input_length() const override { return window_.input_len; }
    Vector forecast(const Vector& history, int horizon) const override;
    Vector one_step_fit(const Vector& values) const override;
    std::string name() const override { return "mlp"; }

    int output_length() const { return window_.output_len; }
    const std::vector<double>& loss_history() const { return loss_history_; }

    /// Network output for one transformed input window.
    Vector predict_window(const Vector& window) const;

  private:
    DatasetTransform transform_;
    WindowConfig window_;
    Matrix w1_;
    Vector b1_;
    Matrix w2_;
    Vector b2_;
    std::vector<double> loss_history_;
};

GlobalMLPModel fit_global_mlp(const SeriesSet& set, const WindowConfig& window, int hidden,
                              int epochs, RngSeed seed, const MlpOptions& options = {});

/// Test double that "knows" the data: its in-sample fit is the series itself
/// and its forecasts are the true continuation when the history is a prefix of
/// a known series (last value repeated otherwise).
class OracleStubModel final : public GlobalModel {
  public:
    OracleStubModel(SeriesSet full, int input_length)
        : full_(std::move(full)), input_length_(input_length) {}

    int input_length() const override { return input_length_; }
    Vector forecast(const Vector& history, int horizon) const override;
    Vector one_step_fit(const Vector& values) const override;
    std::string name() const override { return "oracle_stub"; }

  private:
    SeriesSet full_;
    int input_length_;
};

}  // namespace lomef
