#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lomef/core.hpp"
#include "lomef/ets.hpp"
#include "lomef/preprocess.hpp"
#include "lomef/stl.hpp"
#include "lomef/theta.hpp"

namespace lomef {

enum class ExplainerKind { ETS, THETA, STL_ETS, MSTL_ETS, DHR_AR, AR, PR };

std::string_view to_string(ExplainerKind kind);
ExplainerKind parse_explainer(std::string_view text);

struct CoefficientRow {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
    bool significant = false;
};

/// |t| above this marks a coefficient as significant in the bar-chart data.
inline constexpr double kSignificanceT = 2.0;

/// Linear autoregression with intercept and optional Fourier regressors. Used
/// both per series (AR) and pooled over neighbourhood members (PR).
struct ArModel {
    int order = 1;
    Vector coefficients;  ///< lag 1 first
    double intercept = 0.0;
    std::optional<FourierConfig> fourier;
    Vector fourier_coefficients;
    std::vector<CoefficientRow> table;
    double sse = 0.0;
    Eigen::Index n_obs = 0;
    bool ridge_fallback = false;
};

/// `next_time` is the 1-based time index of the first forecast.
Vector forecast(const ArModel& model, const Vector& history, int next_time, int horizon);

/// AR(p) by OLS with p chosen by AIC in 1..p_max. Values start at `time_origin`.
ArModel fit_ar_local(const Vector& values, int p_max, int time_origin = 1,
                     const std::optional<FourierConfig>& fourier = std::nullopt);

/// AR at a fixed order (no selection).
ArModel fit_ar_order(const Vector& values, int order, int time_origin = 1,
                     const std::optional<FourierConfig>& fourier = std::nullopt);

/// One regression over the windowed records of every member. Requires more
/// than one member.
ArModel fit_pr(const std::vector<Vector>& member_fits, int lags, int time_origin = 1,
               const std::optional<FourierConfig>& fourier = std::nullopt);

/// Fourier-term regression (intercept + linear drift + harmonics) with AR errors.
struct DhrArModel {
    std::vector<int> periods;
    std::vector<int> harmonics;
    double intercept = 0.0;
    double drift = 0.0;
    Vector fourier_coefficients;  ///< per period, per harmonic: sin, cos
    /// First-harmonic (sin, cos) coefficient pair per period.
    std::vector<std::pair<double, double>> first_harmonic;
    int ar_order = 0;
    Vector ar_coefficients;
    Vector residual_tail;  ///< last ar_order regression residuals, oldest first
    std::vector<CoefficientRow> table;
    int time_origin = 1;
    Eigen::Index n_obs = 0;
    double aicc = 0.0;
    bool ridge_fallback = false;
};

DhrArModel fit_dhr_ar(const Vector& values, const std::vector<int>& periods, int k_max,
                      int time_origin = 1);
Vector forecast(const DhrArModel& model, int horizon);

/// Decomposition followed by non-seasonal ETS on trend + remainder; the
/// seasonal components are continued from their last cycle.
struct StlEtsModel {
    STLComponents decomposition;
    EtsModel ets;
};

StlEtsModel fit_stl_ets(const Vector& values, const std::vector<int>& periods);
Vector forecast(const StlEtsModel& model, int horizon);

using MemberModel = std::variant<EtsModel, ThetaModel, StlEtsModel, DhrArModel, ArModel>;

struct ComponentTrack {
    std::string name;
    Vector mean;
    Vector min;
    Vector max;
};

struct ExplanationPayload {
    std::vector<ComponentTrack> tracks;
    std::vector<CoefficientRow> coefficients;
    std::map<std::string, int> trend_forms;
    std::map<std::string, int> seasonal_forms;
};

struct FittedExplainer {
    ExplainerKind kind = ExplainerKind::ETS;
    std::vector<MemberModel> members;
    Vector forecast;
    ExplanationPayload payload;
};

/// Element-wise mean of member forecasts.
Vector bag_forecasts(const std::vector<Vector>& member_forecasts);

/// Summary over homogeneous member models: ETS form histogram, mean tracks
/// with min/max envelopes for decompositions, coefficient tables for the
/// regression kinds.
ExplanationPayload summarize_models(ExplainerKind kind, const std::vector<MemberModel>& members);

/// Everything an explainer needs besides its training data.
struct ExplainerContext {
    std::vector<int> periods;
    int horizon = 1;
    /// Lags for PR and the AR order ceiling (the global model's input window).
    int lags = 1;
    /// 1-based time index of the first training value.
    int time_origin = 1;
    OutputFlags flags;
};

/// Whether `kind` can be fitted to data of this shape.
bool explainer_supported(ExplainerKind kind, const ExplainerContext& ctx, Eigen::Index length,
                         std::size_t members);

/// Fits `kind` on every member (PR: once over all members), bags the member
/// forecasts and applies the output flags.
FittedExplainer fit_explainer(ExplainerKind kind, const std::vector<Vector>& member_fits,
                              const ExplainerContext& ctx);

/// The local benchmark: the same kind fitted on the actual values (PR falls
/// back to AR since there is only one series).
FittedExplainer fit_local_model(ExplainerKind kind, const Vector& values,
                                const ExplainerContext& ctx);

/// Largest admissible harmonic count for DHR given the period and data length.
int dhr_k_max(const std::vector<int>& periods, Eigen::Index length);

}  // namespace lomef
