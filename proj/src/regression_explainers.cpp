#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lomef/explainers.hpp"
#include "lomef/linalg.hpp"
#include "lomef/log.hpp"

namespace lomef {

namespace {

double value_scale(const Vector& y) {
    const double s = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
    return s > 0 ? s : 1.0;
}

bool is_significant(double value, double se) {
    return std::isfinite(se) && se > 0.0 ? std::abs(value / se) > kSignificanceT
                                         : (std::isfinite(se) && value != 0.0);
}

std::string fourier_name(const char* fn, int k, int period) {
    return std::string(fn) + std::to_string(k) + "_" + std::to_string(period);
}

// Rows of the AR design for one series, targets t = first .. T-1.
void append_ar_rows(const Vector& values, int order, Eigen::Index first, int time_origin,
                    const std::optional<FourierConfig>& fourier, Matrix& X, Vector& y,
                    Eigen::Index& row) {
    for (Eigen::Index t = first; t < values.size(); ++t, ++row) {
        for (int j = 0; j < order; ++j) X(row, j) = values(t - 1 - j);
        if (fourier) {
            X.row(row).segment(order, fourier->n_terms()) =
                fourier_terms(time_origin + int(t), *fourier).transpose();
        }
        y(row) = values(t);
    }
}

ArModel ar_from_fit(const LinearFit<double>& fit, int order,
                    const std::optional<FourierConfig>& fourier) {
    ArModel model;
    model.order = order;
    model.coefficients = fit.coefficients.head(order);
    model.intercept = fit.intercept;
    model.fourier = fourier;
    const Eigen::Index nf = fourier ? fourier->n_terms() : 0;
    model.fourier_coefficients = fit.coefficients.segment(order, nf);
    model.sse = fit.sse;
    model.n_obs = fit.n_obs;
    model.ridge_fallback = fit.ridge_fallback;

    model.table.push_back({"intercept", fit.intercept, fit.intercept_std_error,
                           is_significant(fit.intercept, fit.intercept_std_error)});
    for (int j = 0; j < order; ++j) {
        model.table.push_back({"lag" + std::to_string(j + 1), fit.coefficients(j),
                               fit.std_errors(j),
                               is_significant(fit.coefficients(j), fit.std_errors(j))});
    }
    if (fourier) {
        Eigen::Index c = order;
        for (std::size_t p = 0; p < fourier->periods.size(); ++p) {
            for (int k = 1; k <= fourier->harmonics[p]; ++k) {
                for (const char* fn : {"sin", "cos"}) {
                    model.table.push_back({fourier_name(fn, k, fourier->periods[p]),
                                           fit.coefficients(c), fit.std_errors(c),
                                           is_significant(fit.coefficients(c), fit.std_errors(c))});
                    ++c;
                }
            }
        }
    }
    return model;
}

void check_ar_length(Eigen::Index length, int order) {
    if (order < 1) fail(ErrorKind::InvalidArgument, "AR order must be >= 1");
    if (length <= Eigen::Index(order) + 1) {
        fail(ErrorKind::SeriesTooShort, "AR(" + std::to_string(order) + ") needs more than " +
                                            std::to_string(order + 1) + " observations");
    }
}

}  // namespace

Vector forecast(const ArModel& model, const Vector& history, int next_time, int horizon) {
    if (history.size() < model.order) {
        fail(ErrorKind::SeriesTooShort, "history shorter than the AR order");
    }
    Vector buffer(model.order + horizon);
    buffer.head(model.order) = history.tail(model.order);
    for (int k = 0; k < horizon; ++k) {
        double v = model.intercept;
        const Eigen::Index t = model.order + k;
        for (int j = 0; j < model.order; ++j) v += model.coefficients(j) * buffer(t - 1 - j);
        if (model.fourier) v += model.fourier_coefficients.dot(fourier_terms(next_time + k, *model.fourier));
        buffer(t) = v;
    }
    return buffer.tail(horizon);
}

ArModel fit_ar_order(const Vector& values, int order, int time_origin,
                     const std::optional<FourierConfig>& fourier) {
    check_ar_length(values.size(), order);
    if (fourier) fourier->check();
    const Eigen::Index nf = fourier ? fourier->n_terms() : 0;
    const Eigen::Index rows = values.size() - order;
    Matrix X(rows, order + nf);
    Vector y(rows);
    Eigen::Index row = 0;
    append_ar_rows(values, order, order, time_origin, fourier, X, y, row);
    return ar_from_fit(fit_linear(X, y), order, fourier);
}

ArModel fit_ar_local(const Vector& values, int p_max, int time_origin,
                     const std::optional<FourierConfig>& fourier) {
    check_ar_length(values.size(), p_max);
    if (fourier) fourier->check();
    const Eigen::Index nf = fourier ? fourier->n_terms() : 0;
    const Eigen::Index rows = values.size() - p_max;
    const double scale = value_scale(values);

    int best = 1;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        Matrix X(rows, p + nf);
        Vector y(rows);
        Eigen::Index row = 0;
        append_ar_rows(values, p, p_max, time_origin, fourier, X, y, row);
        const auto fit = fit_linear(X, y);
        const double score = aic(fit.sse, rows, p + nf + 2, scale);
        if (score < best_aic) {
            best_aic = score;
            best = p;
        }
    }
    return fit_ar_order(values, best, time_origin, fourier);
}

ArModel fit_pr(const std::vector<Vector>& member_fits, int lags, int time_origin,
               const std::optional<FourierConfig>& fourier) {
    if (member_fits.empty()) fail(ErrorKind::EmptyNeighbourhood, "PR needs a neighbourhood");
    if (member_fits.size() < 2) {
        fail(ErrorKind::InvalidArgument, "PR pools bootstrap members and needs more than one");
    }
    if (fourier) fourier->check();
    Eigen::Index rows = 0;
    for (const auto& m : member_fits) {
        check_ar_length(m.size(), lags);
        rows += m.size() - lags;
    }
    const Eigen::Index nf = fourier ? fourier->n_terms() : 0;
    Matrix X(rows, lags + nf);
    Vector y(rows);
    Eigen::Index row = 0;
    for (const auto& m : member_fits) append_ar_rows(m, lags, lags, time_origin, fourier, X, y, row);
    return ar_from_fit(fit_linear(X, y), lags, fourier);
}

// --- dynamic harmonic regression -------------------------------------------

namespace {

struct DhrDesign {
    Matrix X;                      // drift + retained Fourier columns
    std::vector<Eigen::Index> map; // Fourier slot of each retained column (-1 = drift)
    Eigen::Index n_fourier = 0;    // full Fourier slot count
};

DhrDesign dhr_design(Eigen::Index n, int time_origin, const std::vector<int>& periods,
                     const std::vector<int>& harmonics) {
    DhrDesign d;
    FourierConfig cfg{periods, harmonics};
    d.n_fourier = cfg.n_terms();
    d.map.push_back(-1);
    Eigen::Index slot = 0;
    for (std::size_t p = 0; p < periods.size(); ++p) {
        for (int k = 1; k <= harmonics[p]; ++k) {
            // sin(pi t) vanishes when 2k equals the period
            if (2 * k != periods[p]) d.map.push_back(slot);
            d.map.push_back(slot + 1);
            slot += 2;
        }
    }
    d.X.resize(n, Eigen::Index(d.map.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const int t = time_origin + int(i);
        const Vector f = d.n_fourier > 0 ? fourier_terms(t, cfg) : Vector();
        for (std::size_t c = 0; c < d.map.size(); ++c) {
            d.X(i, Eigen::Index(c)) = d.map[c] < 0 ? double(t) : f(d.map[c]);
        }
    }
    return d;
}

double dhr_score(const Vector& values, int time_origin, const std::vector<int>& periods,
                 const std::vector<int>& harmonics) {
    const DhrDesign d = dhr_design(values.size(), time_origin, periods, harmonics);
    const auto fit = fit_linear(d.X, values);
    return aicc(fit.sse, values.size(), d.X.cols() + 2, value_scale(values));
}

}  // namespace

int dhr_k_max(const std::vector<int>& periods, Eigen::Index length) {
    if (periods.empty()) return 0;
    int k = 10;
    for (int p : periods) k = std::min(k, std::max(1, p / 2));
    const Eigen::Index bound = (length - 8) / (4 * Eigen::Index(periods.size()));
    return std::max(1, std::min<int>(k, int(bound)));
}

DhrArModel fit_dhr_ar(const Vector& values, const std::vector<int>& periods, int k_max,
                      int time_origin) {
    for (int p : periods) {
        if (p < 2) fail(ErrorKind::InvalidArgument, "DHR periods must be >= 2");
    }
    if (!periods.empty() && k_max < 1) fail(ErrorKind::InvalidArgument, "DHR needs K_max >= 1");
    std::vector<int> k_cap(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
        k_cap[i] = std::min(k_max, periods[i] / 2);
        if (k_cap[i] < k_max) {
            log::warn("DHR: K_max " + std::to_string(k_max) + " clamped to " +
                      std::to_string(k_cap[i]) + " for period " + std::to_string(periods[i]));
        }
    }
    int k_total = 0;
    for (int k : k_cap) k_total += k;
    if (values.size() < 4 * Eigen::Index(k_total) + 8) {
        fail(ErrorKind::SeriesTooShort, "DHR needs at least 4 * sum(K_max) + 8 observations");
    }

    // coordinate-wise AICc search over K, one period at a time
    std::vector<int> harmonics(periods.size(), 1);
    for (std::size_t i = 0; i < periods.size(); ++i) {
        int best_k = 1;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= k_cap[i]; ++k) {
            harmonics[i] = k;
            const double score = dhr_score(values, time_origin, periods, harmonics);
            if (score < best) {
                best = score;
                best_k = k;
            }
        }
        harmonics[i] = best_k;
    }

    const DhrDesign d = dhr_design(values.size(), time_origin, periods, harmonics);
    const auto fit = fit_linear(d.X, values);

    DhrArModel model;
    model.periods = periods;
    model.harmonics = harmonics;
    model.time_origin = time_origin;
    model.n_obs = values.size();
    model.ridge_fallback = fit.ridge_fallback;
    model.intercept = fit.intercept;
    model.drift = fit.coefficients(0);
    model.aicc = aicc(fit.sse, values.size(), d.X.cols() + 2, value_scale(values));
    model.fourier_coefficients = Vector::Zero(d.n_fourier);
    Vector fourier_se = Vector::Constant(d.n_fourier, 0.0);
    for (std::size_t c = 1; c < d.map.size(); ++c) {
        model.fourier_coefficients(d.map[c]) = fit.coefficients(Eigen::Index(c));
        fourier_se(d.map[c]) = fit.std_errors(Eigen::Index(c));
    }

    model.table.push_back({"intercept", fit.intercept, fit.intercept_std_error,
                           is_significant(fit.intercept, fit.intercept_std_error)});
    model.table.push_back({"drift", fit.coefficients(0), fit.std_errors(0),
                           is_significant(fit.coefficients(0), fit.std_errors(0))});
    Eigen::Index slot = 0;
    for (std::size_t p = 0; p < periods.size(); ++p) {
        model.first_harmonic.emplace_back(model.fourier_coefficients(slot),
                                          model.fourier_coefficients(slot + 1));
        for (int k = 1; k <= harmonics[p]; ++k) {
            for (const char* fn : {"sin", "cos"}) {
                const double v = model.fourier_coefficients(slot);
                const double se = fourier_se(slot);
                model.table.push_back({fourier_name(fn, k, periods[p]), v, se, is_significant(v, se)});
                ++slot;
            }
        }
    }

    // AR errors, order by AIC in 0..5 on a common sample
    const Vector residuals = values - (d.X * fit.coefficients).array().matrix() -
                             Vector::Constant(values.size(), fit.intercept);
    constexpr int kMaxArOrder = 5;
    const int p_max = std::min<int>(kMaxArOrder, int(values.size() / 4));
    const Eigen::Index rows = values.size() - p_max;
    const double scale = value_scale(values);
    LinearFitOptions no_intercept;
    no_intercept.intercept = false;
    int best_p = 0;
    double best_aic = aic(residuals.tail(rows).squaredNorm(), rows, 1, scale);
    for (int p = 1; p <= p_max; ++p) {
        Matrix X(rows, p);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (int j = 0; j < p; ++j) X(r, j) = residuals(p_max + r - 1 - j);
        }
        const auto f = fit_linear(X, residuals.tail(rows), no_intercept);
        const double score = aic(f.sse, rows, p + 1, scale);
        if (score < best_aic) {
            best_aic = score;
            best_p = p;
        }
    }
    model.ar_order = best_p;
    model.ar_coefficients = Vector::Zero(best_p);
    if (best_p > 0) {
        const Eigen::Index n_rows = values.size() - best_p;
        Matrix X(n_rows, best_p);
        for (Eigen::Index r = 0; r < n_rows; ++r) {
            for (int j = 0; j < best_p; ++j) X(r, j) = residuals(best_p + r - 1 - j);
        }
        const auto f = fit_linear(X, residuals.tail(n_rows), no_intercept);
        model.ar_coefficients = f.coefficients;
        for (int j = 0; j < best_p; ++j) {
            model.table.push_back({"ar" + std::to_string(j + 1), f.coefficients(j), f.std_errors(j),
                                   is_significant(f.coefficients(j), f.std_errors(j))});
        }
    }
    model.residual_tail = residuals.tail(best_p);
    return model;
}

Vector forecast(const DhrArModel& model, int horizon) {
    const FourierConfig cfg{model.periods, model.harmonics};
    Vector errors(model.ar_order + horizon);
    errors.head(model.ar_order) = model.residual_tail;
    Vector out(horizon);
    for (int k = 0; k < horizon; ++k) {
        const int t = model.time_origin + int(model.n_obs) + k;
        double e = 0.0;
        const Eigen::Index idx = model.ar_order + k;
        for (int j = 0; j < model.ar_order; ++j) e += model.ar_coefficients(j) * errors(idx - 1 - j);
        errors(idx) = e;
        double v = model.intercept + model.drift * double(t) + e;
        if (cfg.n_terms() > 0) v += model.fourier_coefficients.dot(fourier_terms(t, cfg));
        out(k) = v;
    }
    return out;
}

}  // namespace lomef
