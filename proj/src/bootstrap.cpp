#include "lomef/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lomef/linalg.hpp"

namespace lomef {

Vector mbb(const Vector& values, int block_len, Rng& rng) {
    const Eigen::Index T = values.size();
    if (block_len < 1 || block_len > T) {
        fail(ErrorKind::InvalidBlockLength, "block length " + std::to_string(block_len) +
                                                " outside [1, " + std::to_string(T) + "]");
    }
    const Eigen::Index l = block_len;
    const Eigen::Index n_blocks = T / l + 2;
    Vector joined(n_blocks * l);
    for (Eigen::Index b = 0; b < n_blocks; ++b) {
        const auto start = Eigen::Index(rng.uniform_index(std::size_t(T - l + 1)));
        joined.segment(b * l, l) = values.segment(start, l);
    }
    const auto offset = Eigen::Index(rng.uniform_index(std::size_t(l)));
    return joined.segment(offset, T);
}

int default_block_length(const std::vector<int>& seasonal_periods, Eigen::Index length) {
    int largest = 1;
    for (int p : seasonal_periods) largest = std::max(largest, p);
    const int l = largest > 1 ? 2 * largest : 8;
    return std::max(1, std::min<int>(l, int(length / 2)));
}

namespace {

Matrix lag_matrix(const Vector& values, int order, Eigen::Index first) {
    const Eigen::Index rows = values.size() - first;
    Matrix X(rows, order);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (int j = 0; j < order; ++j) X(r, j) = values(first + r - 1 - j);
    }
    return X;
}

double series_scale(const Vector& values) {
    const double s = values.size() > 0 ? values.cwiseAbs().maxCoeff() : 0.0;
    return s > 0 ? s : 1.0;
}

}  // namespace

SieveModel fit_sieve_order(const Vector& values, int order) {
    if (order < 1) fail(ErrorKind::InvalidArgument, "sieve order must be >= 1");
    if (values.size() <= order + 1) {
        fail(ErrorKind::SeriesTooShort, "series too short for AR(" + std::to_string(order) + ")");
    }
    const Matrix X = lag_matrix(values, order, order);
    const Vector y = values.tail(values.size() - order);
    const auto fit = fit_linear(X, y);

    SieveModel model;
    model.order = order;
    model.coefficients = fit.coefficients;
    model.intercept = fit.intercept;
    model.residuals.resize(y.size());
    for (Eigen::Index r = 0; r < y.size(); ++r) {
        double fitted = fit.intercept;
        for (int j = 0; j < order; ++j) fitted += fit.coefficients(j) * X(r, j);
        model.residuals(r) = y(r) - fitted;
    }
    return model;
}

SieveModel fit_sieve(const Vector& values, int max_order) {
    if (max_order < 1) fail(ErrorKind::InvalidArgument, "sieve max order must be >= 1");
    const int cap = std::max(1, std::min<int>(max_order, int(values.size() / 2) - 1));
    const Vector y = values.tail(values.size() - cap);
    const double scale = series_scale(values);

    int best = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= cap; ++p) {
        const Matrix X = lag_matrix(values, p, cap);
        const auto fit = fit_linear(X, y);
        const double score = aic(fit.sse, y.size(), p + 2, scale);
        if (score < best_aic) {
            best_aic = score;
            best = p;
        }
    }
    return fit_sieve_order(values, best);
}

Vector sieve_regenerate(const Vector& values, const SieveModel& model, const Vector& residuals) {
    const int p = model.order;
    const Eigen::Index T = values.size();
    if (residuals.size() != T - p) {
        fail(ErrorKind::LengthMismatch, "sieve residuals must have length T - p");
    }
    const double limit = 1e6 * series_scale(values);
    Vector out(T);
    out.head(p) = values.head(p);
    for (Eigen::Index t = p; t < T; ++t) {
        double v = model.intercept + residuals(t - p);
        for (int j = 0; j < p; ++j) v += model.coefficients(j) * out(t - 1 - j);
        if (!std::isfinite(v) || std::abs(v) > limit) {
            fail(ErrorKind::UnstableSieve,
                 "sieve path exceeded 1e6 x series scale at t=" + std::to_string(t + 1));
        }
        out(t) = v;
    }
    return out;
}

}  // namespace lomef
