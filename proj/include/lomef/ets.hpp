#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lomef/core.hpp"

namespace lomef {

enum class TrendForm { None, Additive, Damped };
enum class SeasonalForm { None, Additive };

/// Additive-error exponential smoothing form, written like "A,Ad,N".
struct EtsForm {
    TrendForm trend = TrendForm::None;
    SeasonalForm seasonal = SeasonalForm::None;

    std::string label() const;
    std::string trend_label() const;
    std::string seasonal_label() const;
    /// Smoothing parameters plus initial states.
    int n_parameters(int period) const;

    friend bool operator==(const EtsForm&, const EtsForm&) = default;
};

struct EtsCandidate {
    EtsForm form;
    double aicc = 0.0;
    int n_parameters = 0;
    bool failed = false;
};

struct EtsModel {
    EtsForm form;
    int period = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double phi = 1.0;
    double initial_level = 0.0;
    double initial_trend = 0.0;
    Vector initial_seasonal;
    double sse = 0.0;
    double aicc = 0.0;
    Eigen::Index n_obs = 0;

    /// State after the last observation.
    double level = 0.0;
    double trend = 0.0;
    Vector seasonal_state;  ///< last `period` seasonal states, oldest first

    /// State paths over the sample (seasonal path empty for non-seasonal forms).
    Vector level_path;
    Vector trend_path;
    Vector seasonal_path;
    Vector fitted;

    std::vector<EtsCandidate> candidates;
};

/// Seasonal forms are only offered when period <= kMaxEtsSeasonalPeriod.
inline constexpr int kMaxEtsSeasonalPeriod = 24;

/// Fits every admissible form by Nelder-Mead on the one-step SSE and keeps the
/// lowest AICc. Candidate forms: (A,N,N), (A,A,N), (A,Ad,N) and, when the
/// period allows it, their additive-seasonal counterparts.
EtsModel fit_ets(const Vector& values, std::optional<int> seasonal_period);

/// Fits one form only.
EtsModel fit_ets_form(const Vector& values, EtsForm form, int period);

Vector forecast(const EtsModel& model, int horizon);

}  // namespace lomef
