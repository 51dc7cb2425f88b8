#include "lomef/gfm.hpp"
#include "lomef/linalg.hpp"
#include "lomef/log.hpp"

namespace lomef {

PooledARModel::PooledARModel(DatasetTransform transform, int lag_order, Vector coefficients,
                             double intercept, std::optional<FourierConfig> fourier,
                             Vector fourier_coefficients, bool ridge_fallback)
    : transform_(std::move(transform)),
      lag_order_(lag_order),
      coefficients_(std::move(coefficients)),
      intercept_(intercept),
      fourier_(std::move(fourier)),
      fourier_coefficients_(std::move(fourier_coefficients)),
      ridge_fallback_(ridge_fallback) {}

double PooledARModel::step(const Vector& window, int t) const {
    double value = intercept_;
    for (int j = 0; j < lag_order_; ++j) value += coefficients_(j) * window(lag_order_ - 1 - j);
    if (fourier_) value += fourier_coefficients_.dot(fourier_terms(t, *fourier_));
    return value;
}

Vector PooledARModel::one_step_fit(const Vector& values) const {
    const Eigen::Index T = values.size();
    if (T <= lag_order_) fail(ErrorKind::SeriesTooShort, "series is not longer than the lag order");
    const auto [z, record] = transform_.forward(values);
    Vector raw(T - lag_order_);
    for (Eigen::Index t = lag_order_; t < T; ++t) {
        raw(t - lag_order_) = step(z.segment(t - lag_order_, lag_order_), int(t + 1));
    }
    return transform_.inverse(raw, record);
}

Vector PooledARModel::forecast(const Vector& history, int horizon) const {
    const Eigen::Index T = history.size();
    if (T < lag_order_) fail(ErrorKind::SeriesTooShort, "history is shorter than the lag order");
    if (horizon < 1) fail(ErrorKind::InvalidArgument, "horizon must be >= 1");
    const auto [z, record] = transform_.forward(history);
    Vector buffer(lag_order_ + horizon);
    buffer.head(lag_order_) = z.tail(lag_order_);
    for (int k = 0; k < horizon; ++k) {
        buffer(lag_order_ + k) = step(buffer.segment(k, lag_order_), int(T + 1 + k));
    }
    return transform_.inverse(buffer.tail(horizon), record);
}

PooledARModel fit_pooled_ar(const SeriesSet& set, const WindowConfig& window,
                            const std::optional<FourierConfig>& fourier,
                            const PreprocessOptions& preprocess) {
    const int n = window.input_len;
    if (n < 1) fail(ErrorKind::InvalidArgument, "lag order must be >= 1");
    if (set.series.empty()) fail(ErrorKind::InvalidArgument, "cannot fit a global model on no series");
    if (fourier) fourier->check();

    DatasetTransform transform = DatasetTransform::fit(set, preprocess);
    const int n_fourier = fourier ? fourier->n_terms() : 0;

    Eigen::Index rows = 0;
    for (const auto& s : set.series) {
        if (s.values.size() <= n) {
            fail(ErrorKind::SeriesTooShort, "series " + s.id + " is too short for lag order " +
                                                std::to_string(n));
        }
        rows += s.values.size() - n;
    }

    Matrix X(rows, n + n_fourier);
    Vector y(rows);
    Eigen::Index r = 0;
    for (const auto& s : set.series) {
        const Vector z = transform.forward(s.values).first;
        for (Eigen::Index t = n; t < z.size(); ++t, ++r) {
            for (int j = 0; j < n; ++j) X(r, j) = z(t - 1 - j);
            if (fourier) X.row(r).tail(n_fourier) = fourier_terms(int(t + 1), *fourier).transpose();
            y(r) = z(t);
        }
    }

    const auto fit = fit_linear(X, y);
    if (fit.ridge_fallback) {
        log::warn("pooled AR design is rank-deficient; using ridge fallback");
    }
    if (!fit.coefficients.allFinite()) fail(ErrorKind::FitFailure, "pooled AR coefficients are not finite");
    return PooledARModel(std::move(transform), n, fit.coefficients.head(n), fit.intercept, fourier,
                         fit.coefficients.tail(n_fourier), fit.ridge_fallback);
}

}  // namespace lomef
