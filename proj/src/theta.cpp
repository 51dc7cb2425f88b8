#include "lomef/theta.hpp"

#include <cmath>
#include <limits>

#include "lomef/optim.hpp"

namespace lomef {

double autocorrelation(const Vector& values, int lag) {
    const Eigen::Index n = values.size();
    if (lag <= 0 || lag >= n) return 0.0;
    const Vector centred = values.array() - values.mean();
    const double denom = centred.squaredNorm();
    if (denom == 0.0) return 0.0;
    return centred.head(n - lag).dot(centred.tail(n - lag)) / denom;
}

Vector classical_seasonal_indices(const Vector& values, int period) {
    const Eigen::Index n = values.size();
    if (period < 2 || n < 2 * Eigen::Index(period)) {
        fail(ErrorKind::PeriodTooLong, "classical decomposition needs two full cycles");
    }
    // centred moving average; 2 x m for even m
    const bool even = period % 2 == 0;
    const Eigen::Index half = period / 2;
    Vector sums = Vector::Zero(period);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(period);
    for (Eigen::Index t = half; t + half < n; ++t) {
        double ma = 0.0;
        if (even) {
            ma = 0.5 * values(t - half) + 0.5 * values(t + half);
            for (Eigen::Index j = t - half + 1; j < t + half; ++j) ma += values(j);
        } else {
            for (Eigen::Index j = t - half; j <= t + half; ++j) ma += values(j);
        }
        ma /= double(period);
        sums(t % period) += values(t) - ma;
        counts(t % period) += 1;
    }
    Vector idx(period);
    for (int j = 0; j < period; ++j) idx(j) = counts(j) > 0 ? sums(j) / counts(j) : 0.0;
    idx.array() -= idx.mean();
    return idx;
}

namespace {

double ses_filter(const Vector& y, double alpha, double l0, double* last_level) {
    double level = l0;
    double sse = 0.0;
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        const double e = y(t) - level;
        sse += e * e;
        level += alpha * e;
    }
    if (last_level) *last_level = level;
    return sse;
}

double ols_slope(const Vector& y) {
    const Eigen::Index n = y.size();
    const double t_mean = double(n + 1) / 2.0;
    const double y_mean = y.mean();
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dt = double(i + 1) - t_mean;
        num += dt * (y(i) - y_mean);
        den += dt * dt;
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace

ThetaModel fit_theta(const Vector& values, std::optional<int> seasonal_period) {
    const Eigen::Index n = values.size();
    if (n < 4) fail(ErrorKind::SeriesTooShort, "THETA needs at least 4 observations");
    ThetaModel model;
    model.n_obs = n;

    Vector adjusted = values;
    const int period = seasonal_period.value_or(0);
    if (period >= 2 && n >= 2 * Eigen::Index(period)) {
        const double r = autocorrelation(values, period);
        if (std::abs(r) > 1.645 / std::sqrt(double(n))) {
            model.seasonally_adjusted = true;
            model.period = period;
            model.seasonal_indices = classical_seasonal_indices(values, period);
            for (Eigen::Index t = 0; t < n; ++t) adjusted(t) -= model.seasonal_indices(t % period);
        }
    }

    const double mean = adjusted.mean();
    const double sd = std::sqrt((adjusted.array() - mean).square().sum() / double(n - 1));
    const double scale = sd > 0 ? sd : std::max(std::abs(mean) * 1e-3, 1e-8);
    const double l0_start = adjusted(0);
    auto objective = [&](const Vector& x) {
        return ses_filter(adjusted, to_interval(x(0), 1e-4, 0.9999), l0_start + scale * x(1),
                          nullptr);
    };
    Vector x0(2);
    x0 << from_interval(0.5, 1e-4, 0.9999), 0.0;
    const auto opt = nelder_mead(objective, x0, Vector::Constant(2, 0.5));
    if (!std::isfinite(opt.value)) fail(ErrorKind::FitFailure, "THETA smoothing diverged");

    model.ses_alpha = to_interval(opt.x(0), 1e-4, 0.9999);
    ses_filter(adjusted, model.ses_alpha, l0_start + scale * opt.x(1), &model.level);
    model.slope = ols_slope(adjusted);
    model.drift = 0.5 * model.slope;
    return model;
}

Vector forecast(const ThetaModel& model, int horizon) {
    Vector out(horizon);
    for (int k = 1; k <= horizon; ++k) {
        double v = model.level + model.drift * double(k);
        if (model.seasonally_adjusted) {
            v += model.seasonal_indices((model.n_obs + k - 1) % model.period);
        }
        out(k - 1) = v;
    }
    return out;
}

}  // namespace lomef
