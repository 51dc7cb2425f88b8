#include "lomef/ets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lomef/linalg.hpp"
#include "lomef/optim.hpp"

namespace lomef {

std::string EtsForm::trend_label() const {
    switch (trend) {
        case TrendForm::None: return "N";
        case TrendForm::Additive: return "A";
        case TrendForm::Damped: return "Ad";
    }
    return "?";
}

std::string EtsForm::seasonal_label() const {
    return seasonal == SeasonalForm::Additive ? "A" : "N";
}

std::string EtsForm::label() const { return "A," + trend_label() + "," + seasonal_label(); }

int EtsForm::n_parameters(int period) const {
    int k = 2;  // alpha, l0
    if (trend != TrendForm::None) k += 2;  // beta, b0
    if (trend == TrendForm::Damped) k += 1;
    if (seasonal == SeasonalForm::Additive) k += 1 + period;
    return k;
}

namespace {

constexpr double kAlphaLo = 1e-4;
constexpr double kAlphaHi = 0.9999;
constexpr double kSmoothLo = 1e-4;
constexpr double kPhiLo = 0.8;
constexpr double kPhiHi = 0.98;

struct Params {
    double alpha = 0.5;
    double beta = 0.0;
    double gamma = 0.0;
    double phi = 1.0;
    double l0 = 0.0;
    double b0 = 0.0;
};

struct StartValues {
    double l0 = 0.0;
    double b0 = 0.0;
    Vector seasonal;
    double scale = 1.0;
};

StartValues start_values(const Vector& y, EtsForm form, int period) {
    StartValues s;
    const Eigen::Index n = y.size();
    const double mean = y.mean();
    const double sd = std::sqrt((y.array() - mean).square().sum() / double(std::max<Eigen::Index>(n - 1, 1)));
    s.scale = sd > 0 ? sd : std::max(std::abs(mean) * 1e-3, 1e-8);

    if (form.seasonal == SeasonalForm::Additive) {
        const double c1 = y.head(period).mean();
        const double c2 = y.segment(period, period).mean();
        const double slope = form.trend != TrendForm::None ? (c2 - c1) / double(period) : 0.0;
        s.seasonal.resize(period);
        for (int j = 0; j < period; ++j) {
            s.seasonal(j) = 0.5 * ((y(j) - c1) + (y(j + period) - c2));
        }
        s.seasonal.array() -= s.seasonal.mean();
        // level at time 0 sits half a cycle before the centre of the first cycle
        s.l0 = c1 - slope * (double(period) + 1.0) / 2.0;
        s.b0 = slope;
    } else if (form.trend != TrendForm::None) {
        s.b0 = y(1) - y(0);
        s.l0 = y(0) - s.b0;
    } else {
        s.l0 = y(0);
    }
    return s;
}

struct Filtered {
    double sse = 0.0;
    double level = 0.0;
    double trend = 0.0;
    Vector seasonal;  // circular buffer, oldest first after the final rotation
};

// Runs the additive-error recursions. When `model` is non-null the state paths
// and fitted values are stored in it.
double run_filter(const Vector& y, EtsForm form, int period, const Params& p,
                  const Vector& s0, EtsModel* model) {
    const bool has_trend = form.trend != TrendForm::None;
    const bool seasonal = form.seasonal == SeasonalForm::Additive;
    const double phi = form.trend == TrendForm::Damped ? p.phi : 1.0;
    double level = p.l0;
    double trend = has_trend ? p.b0 : 0.0;
    Vector s = seasonal ? s0 : Vector();
    const Eigen::Index n = y.size();
    if (model) {
        model->level_path.resize(n);
        model->trend_path.resize(has_trend ? n : 0);
        model->seasonal_path.resize(seasonal ? n : 0);
        model->fitted.resize(n);
    }
    double sse = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::Index slot = seasonal ? t % period : 0;
        const double season = seasonal ? s(slot) : 0.0;
        const double yhat = level + phi * trend + season;
        const double e = y(t) - yhat;
        sse += e * e;
        const double new_level = level + phi * trend + p.alpha * e;
        trend = has_trend ? phi * trend + p.beta * e : 0.0;
        level = new_level;
        if (seasonal) s(slot) = season + p.gamma * e;
        if (model) {
            model->fitted(t) = yhat;
            model->level_path(t) = level;
            if (has_trend) model->trend_path(t) = trend;
            if (seasonal) model->seasonal_path(t) = s(slot);
        }
        if (!std::isfinite(sse)) return std::numeric_limits<double>::infinity();
    }
    if (model) {
        model->level = level;
        model->trend = trend;
        if (seasonal) {
            // rotate so that element 0 is the state used for time n + 1
            Vector rotated(period);
            for (int j = 0; j < period; ++j) rotated(j) = s((n + j) % period);
            model->seasonal_state = rotated;
        }
    }
    return sse;
}

struct Layout {
    bool trend = false;
    bool damped = false;
    bool seasonal = false;
    int dim = 2;
};

Layout layout_for(EtsForm form) {
    Layout l;
    l.trend = form.trend != TrendForm::None;
    l.damped = form.trend == TrendForm::Damped;
    l.seasonal = form.seasonal == SeasonalForm::Additive;
    l.dim = 2 + (l.trend ? 2 : 0) + (l.damped ? 1 : 0) + (l.seasonal ? 1 : 0);
    return l;
}

Params decode(const Vector& x, const Layout& l, const StartValues& start) {
    Params p;
    Eigen::Index i = 0;
    p.alpha = to_interval(x(i++), kAlphaLo, kAlphaHi);
    p.l0 = start.l0 + start.scale * x(i++);
    if (l.trend) {
        p.beta = to_interval(x(i++), kSmoothLo, p.alpha);
        p.b0 = start.b0 + 0.1 * start.scale * x(i++);
    }
    if (l.damped) p.phi = to_interval(x(i++), kPhiLo, kPhiHi);
    if (l.seasonal) p.gamma = to_interval(x(i++), kSmoothLo, 1.0 - p.alpha);
    return p;
}

Vector initial_point(const Layout& l) {
    Vector x = Vector::Zero(l.dim);
    Eigen::Index i = 0;
    x(i++) = from_interval(0.3, kAlphaLo, kAlphaHi);
    x(i++) = 0.0;
    if (l.trend) {
        x(i++) = from_interval(0.1, 0.0, 1.0);  // fraction of alpha
        x(i++) = 0.0;
    }
    if (l.damped) x(i++) = from_interval(0.95, kPhiLo, kPhiHi);
    if (l.seasonal) x(i++) = from_interval(0.1, 0.0, 1.0);
    return x;
}

double value_scale(const Vector& y) {
    const double s = y.cwiseAbs().maxCoeff();
    return s > 0 ? s : 1.0;
}

}  // namespace

EtsModel fit_ets_form(const Vector& values, EtsForm form, int period) {
    if (values.size() < 10) fail(ErrorKind::SeriesTooShort, "ETS needs at least 10 observations");
    if (form.seasonal == SeasonalForm::Additive) {
        if (period < 2 || period > kMaxEtsSeasonalPeriod) {
            fail(ErrorKind::InvalidArgument, "seasonal ETS needs a period in [2, 24]");
        }
        if (values.size() < 2 * Eigen::Index(period)) {
            fail(ErrorKind::PeriodTooLong, "seasonal ETS needs two full cycles");
        }
    }
    const Layout layout = layout_for(form);
    const StartValues start = start_values(values, form, form.seasonal == SeasonalForm::Additive ? period : 0);

    auto objective = [&](const Vector& x) {
        return run_filter(values, form, period, decode(x, layout, start), start.seasonal, nullptr);
    };
    const Vector step = Vector::Constant(layout.dim, 0.5);
    const NelderMeadResult opt = nelder_mead(objective, initial_point(layout), step);
    if (!std::isfinite(opt.value)) fail(ErrorKind::FitFailure, "ETS " + form.label() + " diverged");

    const Params p = decode(opt.x, layout, start);
    EtsModel model;
    model.form = form;
    model.period = layout.seasonal ? period : 0;
    model.alpha = p.alpha;
    model.beta = layout.trend ? p.beta : 0.0;
    model.gamma = layout.seasonal ? p.gamma : 0.0;
    model.phi = layout.damped ? p.phi : 1.0;
    model.initial_level = p.l0;
    model.initial_trend = layout.trend ? p.b0 : 0.0;
    model.initial_seasonal = start.seasonal;
    model.sse = run_filter(values, form, period, p, start.seasonal, &model);
    model.n_obs = values.size();
    model.aicc = aicc(model.sse, model.n_obs, form.n_parameters(model.period) + 1,
                      value_scale(values));
    return model;
}

EtsModel fit_ets(const Vector& values, std::optional<int> seasonal_period) {
    if (values.size() < 10) fail(ErrorKind::SeriesTooShort, "ETS needs at least 10 observations");
    std::vector<EtsForm> forms = {
        {TrendForm::None, SeasonalForm::None},
        {TrendForm::Additive, SeasonalForm::None},
        {TrendForm::Damped, SeasonalForm::None},
    };
    const int period = seasonal_period.value_or(0);
    const bool seasonal_ok = period >= 2 && period <= kMaxEtsSeasonalPeriod &&
                             values.size() >= 2 * Eigen::Index(period);
    if (seasonal_ok) {
        forms.push_back({TrendForm::None, SeasonalForm::Additive});
        forms.push_back({TrendForm::Additive, SeasonalForm::Additive});
        forms.push_back({TrendForm::Damped, SeasonalForm::Additive});
    }
    std::stable_sort(forms.begin(), forms.end(), [&](const EtsForm& a, const EtsForm& b) {
        return a.n_parameters(period) < b.n_parameters(period);
    });

    std::optional<EtsModel> best;
    std::vector<EtsCandidate> candidates;
    for (const EtsForm& form : forms) {
        EtsCandidate c;
        c.form = form;
        c.n_parameters = form.n_parameters(form.seasonal == SeasonalForm::Additive ? period : 0);
        try {
            EtsModel m = fit_ets_form(values, form, period);
            c.aicc = m.aicc;
            c.failed = !std::isfinite(m.aicc);
            if (!c.failed && (!best || m.aicc < best->aicc)) best = std::move(m);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::FitFailure) throw;
            c.failed = true;
            c.aicc = std::numeric_limits<double>::infinity();
        }
        candidates.push_back(c);
    }
    if (!best) fail(ErrorKind::FitFailure, "every ETS candidate diverged");
    best->candidates = std::move(candidates);
    return *best;
}

Vector forecast(const EtsModel& model, int horizon) {
    Vector out(horizon);
    const bool seasonal = model.form.seasonal == SeasonalForm::Additive;
    double damp = 0.0;
    double phi_k = 1.0;
    for (int k = 1; k <= horizon; ++k) {
        phi_k *= model.phi;
        damp += phi_k;
        double v = model.level;
        if (model.form.trend != TrendForm::None) v += damp * model.trend;
        if (seasonal) v += model.seasonal_state((k - 1) % model.period);
        out(k - 1) = v;
    }
    return out;
}

}  // namespace lomef
