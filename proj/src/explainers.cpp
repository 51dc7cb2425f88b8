#include "lomef/explainers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lomef/log.hpp"

namespace lomef {

std::string_view to_string(ExplainerKind kind) {
    switch (kind) {
        case ExplainerKind::ETS: return "ETS";
        case ExplainerKind::THETA: return "THETA";
        case ExplainerKind::STL_ETS: return "STL_ETS";
        case ExplainerKind::MSTL_ETS: return "MSTL_ETS";
        case ExplainerKind::DHR_AR: return "DHR_AR";
        case ExplainerKind::AR: return "AR";
        case ExplainerKind::PR: return "PR";
    }
    return "?";
}

ExplainerKind parse_explainer(std::string_view text) {
    std::string upper(text);
    for (auto& c : upper) c = char(std::toupper(static_cast<unsigned char>(c)));
    for (ExplainerKind k : {ExplainerKind::ETS, ExplainerKind::THETA, ExplainerKind::STL_ETS,
                            ExplainerKind::MSTL_ETS, ExplainerKind::DHR_AR, ExplainerKind::AR,
                            ExplainerKind::PR}) {
        if (upper == to_string(k)) return k;
    }
    fail(ErrorKind::ParseError, "unknown explainer '" + std::string(text) + "'");
}

StlEtsModel fit_stl_ets(const Vector& values, const std::vector<int>& periods) {
    StlEtsModel model;
    model.decomposition = mstl_decompose(values, periods);
    const Vector adjusted = values - model.decomposition.seasonal_sum();
    model.ets = fit_ets(adjusted, std::nullopt);
    return model;
}

Vector forecast(const StlEtsModel& model, int horizon) {
    Vector out = forecast(model.ets, horizon);
    const auto& d = model.decomposition;
    for (std::size_t j = 0; j < d.seasonal.size(); ++j) {
        const Eigen::Index p = d.periods[j];
        const Eigen::Index n = d.seasonal[j].size();
        for (int k = 0; k < horizon; ++k) out(k) += d.seasonal[j](n - p + k % p);
    }
    return out;
}

Vector bag_forecasts(const std::vector<Vector>& member_forecasts) {
    if (member_forecasts.empty()) fail(ErrorKind::EmptyNeighbourhood, "nothing to bag");
    Vector sum = Vector::Zero(member_forecasts.front().size());
    for (const auto& f : member_forecasts) {
        if (f.size() != sum.size()) fail(ErrorKind::LengthMismatch, "member forecasts differ in length");
        sum += f;
    }
    return sum / double(member_forecasts.size());
}

namespace {

template <typename Model>
const Model& expect(const MemberModel& m) {
    const Model* p = std::get_if<Model>(&m);
    if (!p) fail(ErrorKind::MixedKinds, "member models are not all of the expected kind");
    return *p;
}

class TrackBuilder {
  public:
    void add(const std::string& name, const Vector& path) {
        for (auto& t : tracks_) {
            if (t.name != name) continue;
            if (t.mean.size() != path.size()) return;
            t.mean += path;
            t.min = t.min.cwiseMin(path);
            t.max = t.max.cwiseMax(path);
            counts_[&t - tracks_.data()] += 1;
            return;
        }
        tracks_.push_back({name, path, path, path});
        counts_.push_back(1);
    }

    std::vector<ComponentTrack> finish() {
        for (std::size_t i = 0; i < tracks_.size(); ++i) tracks_[i].mean /= double(counts_[i]);
        return std::move(tracks_);
    }

  private:
    std::vector<ComponentTrack> tracks_;
    std::vector<int> counts_;
};

// Averages coefficient tables row by row (matched on name); members lacking a
// row do not contribute to it.
std::vector<CoefficientRow> average_tables(const std::vector<const std::vector<CoefficientRow>*>& tables) {
    std::vector<CoefficientRow> rows;
    std::vector<int> counts;
    for (const auto* table : tables) {
        for (const auto& r : *table) {
            auto it = std::find_if(rows.begin(), rows.end(),
                                   [&](const CoefficientRow& x) { return x.name == r.name; });
            if (it == rows.end()) {
                rows.push_back({r.name, 0.0, 0.0, false});
                counts.push_back(0);
                it = rows.end() - 1;
            }
            it->value += r.value;
            it->std_error += r.std_error;
            counts[std::size_t(it - rows.begin())] += 1;
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].value /= counts[i];
        rows[i].std_error /= counts[i];
        const double se = rows[i].std_error;
        rows[i].significant = std::isfinite(se) && se > 0.0
                                  ? std::abs(rows[i].value / se) > kSignificanceT
                                  : false;
    }
    if (tables.size() == 1) return *tables.front();
    return rows;
}

void add_decomposition(TrackBuilder& tracks, const STLComponents& d) {
    tracks.add("trend", d.trend);
    for (std::size_t j = 0; j < d.seasonal.size(); ++j) {
        tracks.add("seasonal_" + std::to_string(d.periods[j]), d.seasonal[j]);
    }
    tracks.add("remainder", d.remainder);
}

}  // namespace

ExplanationPayload summarize_models(ExplainerKind kind, const std::vector<MemberModel>& members) {
    if (members.empty()) fail(ErrorKind::EmptyNeighbourhood, "no member models to summarise");
    ExplanationPayload payload;
    TrackBuilder tracks;
    std::vector<const std::vector<CoefficientRow>*> tables;
    switch (kind) {
        case ExplainerKind::ETS:
            for (const auto& m : members) {
                const auto& ets = expect<EtsModel>(m);
                payload.trend_forms[ets.form.trend_label()] += 1;
                payload.seasonal_forms[ets.form.seasonal_label()] += 1;
                tracks.add("level", ets.level_path);
                if (ets.trend_path.size() > 0) tracks.add("slope", ets.trend_path);
                if (ets.seasonal_path.size() > 0) tracks.add("seasonal", ets.seasonal_path);
            }
            break;
        case ExplainerKind::THETA: {
            std::vector<std::vector<CoefficientRow>> own;
            own.reserve(members.size());
            for (const auto& m : members) {
                const auto& theta = expect<ThetaModel>(m);
                const double nan = std::numeric_limits<double>::quiet_NaN();
                own.push_back({{"alpha", theta.ses_alpha, nan, false},
                               {"drift", theta.drift, nan, false}});
            }
            for (const auto& t : own) tables.push_back(&t);
            payload.coefficients = average_tables(tables);
            return payload;
        }
        case ExplainerKind::STL_ETS:
        case ExplainerKind::MSTL_ETS:
            for (const auto& m : members) {
                const auto& model = expect<StlEtsModel>(m);
                add_decomposition(tracks, model.decomposition);
                payload.trend_forms[model.ets.form.trend_label()] += 1;
                payload.seasonal_forms[model.ets.form.seasonal_label()] += 1;
            }
            break;
        case ExplainerKind::DHR_AR:
            for (const auto& m : members) tables.push_back(&expect<DhrArModel>(m).table);
            break;
        case ExplainerKind::AR:
        case ExplainerKind::PR:
            for (const auto& m : members) tables.push_back(&expect<ArModel>(m).table);
            break;
    }
    payload.tracks = tracks.finish();
    if (!tables.empty()) payload.coefficients = average_tables(tables);
    return payload;
}

namespace {

std::optional<int> largest_period(const std::vector<int>& periods) {
    if (periods.empty()) return std::nullopt;
    return *std::max_element(periods.begin(), periods.end());
}

std::vector<int> decomposable_periods(const std::vector<int>& periods, Eigen::Index length,
                                      bool largest_only) {
    std::vector<int> out;
    for (int p : periods) {
        if (p >= 2 && length >= 2 * Eigen::Index(p)) out.push_back(p);
    }
    if (largest_only && out.size() > 1) out = {*std::max_element(out.begin(), out.end())};
    return out;
}

std::optional<FourierConfig> pr_fourier(const std::vector<int>& periods) {
    std::vector<int> ps;
    for (int p : periods) {
        if (p >= 2) ps.push_back(p);
    }
    if (ps.empty()) return std::nullopt;
    return FourierConfig{ps, std::vector<int>(ps.size(), 1)};
}

int ar_order_cap(int lags, Eigen::Index length) {
    return std::max(1, std::min<int>(lags, int((length - 2) / 2)));
}

std::vector<int> dhr_periods(const std::vector<int>& periods, Eigen::Index length) {
    std::vector<int> out;
    for (int p : periods) {
        if (p >= 2 && length >= 2 * Eigen::Index(p)) out.push_back(p);
    }
    return out;
}

struct MemberResult {
    MemberModel model;
    Vector forecast;
};

MemberResult fit_member(ExplainerKind kind, const Vector& values, const ExplainerContext& ctx) {
    const int next_time = ctx.time_origin + int(values.size());
    switch (kind) {
        case ExplainerKind::ETS: {
            EtsModel m = fit_ets(values, largest_period(ctx.periods));
            Vector f = forecast(m, ctx.horizon);
            return {std::move(m), std::move(f)};
        }
        case ExplainerKind::THETA: {
            ThetaModel m = fit_theta(values, largest_period(ctx.periods));
            Vector f = forecast(m, ctx.horizon);
            return {std::move(m), std::move(f)};
        }
        case ExplainerKind::STL_ETS:
        case ExplainerKind::MSTL_ETS: {
            StlEtsModel m = fit_stl_ets(
                values, decomposable_periods(ctx.periods, values.size(),
                                             kind == ExplainerKind::STL_ETS));
            Vector f = forecast(m, ctx.horizon);
            return {std::move(m), std::move(f)};
        }
        case ExplainerKind::DHR_AR: {
            const auto periods = dhr_periods(ctx.periods, values.size());
            DhrArModel m = fit_dhr_ar(values, periods, dhr_k_max(periods, values.size()),
                                      ctx.time_origin);
            Vector f = forecast(m, ctx.horizon);
            return {std::move(m), std::move(f)};
        }
        case ExplainerKind::AR:
        case ExplainerKind::PR: {
            ArModel m = fit_ar_local(values, ar_order_cap(ctx.lags, values.size()), ctx.time_origin);
            Vector f = forecast(m, values, next_time, ctx.horizon);
            return {std::move(m), std::move(f)};
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown explainer kind");
}

void check_finite(const Vector& f, ExplainerKind kind) {
    if (!f.allFinite()) {
        fail(ErrorKind::NonFiniteForecast, std::string(to_string(kind)) + " produced a non-finite forecast");
    }
}

}  // namespace

bool explainer_supported(ExplainerKind kind, const ExplainerContext& ctx, Eigen::Index length,
                         std::size_t members) {
    switch (kind) {
        case ExplainerKind::ETS:
        case ExplainerKind::STL_ETS:
        case ExplainerKind::MSTL_ETS:
            return length >= 10;
        case ExplainerKind::THETA:
            return length >= 4;
        case ExplainerKind::DHR_AR: {
            const auto periods = dhr_periods(ctx.periods, length);
            return length >= 4 * Eigen::Index(periods.size()) + 8;
        }
        case ExplainerKind::AR:
            return length >= 4;
        case ExplainerKind::PR:
            return members > 1 && length > ctx.lags + 1;
    }
    return false;
}

FittedExplainer fit_explainer(ExplainerKind kind, const std::vector<Vector>& member_fits,
                              const ExplainerContext& ctx) {
    if (member_fits.empty()) fail(ErrorKind::EmptyNeighbourhood, "neighbourhood has no members");
    FittedExplainer out;
    out.kind = kind;
    std::vector<Vector> forecasts;
    forecasts.reserve(member_fits.size());

    if (kind == ExplainerKind::PR) {
        ArModel model = fit_pr(member_fits, ctx.lags, ctx.time_origin, pr_fourier(ctx.periods));
        for (const auto& m : member_fits) {
            forecasts.push_back(forecast(model, m, ctx.time_origin + int(m.size()), ctx.horizon));
            check_finite(forecasts.back(), kind);
        }
        out.members.push_back(std::move(model));
    } else {
        out.members.reserve(member_fits.size());
        for (const auto& m : member_fits) {
            MemberResult r = fit_member(kind, m, ctx);
            check_finite(r.forecast, kind);
            forecasts.push_back(std::move(r.forecast));
            out.members.push_back(std::move(r.model));
        }
    }
    out.forecast = apply_output_flags(bag_forecasts(forecasts), ctx.flags);
    out.payload = summarize_models(kind, out.members);
    return out;
}

FittedExplainer fit_local_model(ExplainerKind kind, const Vector& values,
                                const ExplainerContext& ctx) {
    const ExplainerKind local = kind == ExplainerKind::PR ? ExplainerKind::AR : kind;
    FittedExplainer out = fit_explainer(local, {values}, ctx);
    out.kind = kind;
    return out;
}

}  // namespace lomef
