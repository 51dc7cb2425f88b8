#include "lomef/stl.hpp"

#include <algorithm>
#include <cmath>

namespace lomef {

Vector STLComponents::seasonal_sum() const {
    Vector sum = Vector::Zero(trend.size());
    for (const auto& s : seasonal) sum += s;
    return sum;
}

Vector STLComponents::signal() const { return trend + seasonal_sum(); }

int default_trend_span(int period, Eigen::Index length) {
    int span = 0;
    if (period <= 1) {
        span = int(length / 4);
    } else {
        span = int(std::ceil(1.5 * double(period)));
    }
    if (span % 2 == 0) ++span;
    return std::max(span, 3);
}

Vector loess_smooth(const Vector& values, int span) {
    const Eigen::Index T = values.size();
    if (T == 0 || span < 2) return values;
    const Eigen::Index q = std::min<Eigen::Index>(span, T);
    Vector out(T);
    for (Eigen::Index i = 0; i < T; ++i) {
        Eigen::Index lo = std::clamp<Eigen::Index>(i - q / 2, 0, T - q);
        const Eigen::Index hi = lo + q - 1;
        double h = double(std::max(i - lo, hi - i));
        if (span > T) h += double(span - T) / 2.0;
        h = std::max(h, 1.0) * 1.000001;

        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (Eigen::Index j = lo; j <= hi; ++j) {
            const double u = std::abs(double(j - i)) / h;
            if (u >= 1.0) continue;
            const double c = 1.0 - u * u * u;
            const double w = c * c * c;
            const double x = double(j - i);
            sw += w;
            sx += w * x;
            sy += w * values(j);
            sxx += w * x * x;
            sxy += w * x * values(j);
        }
        const double mx = sx / sw;
        const double my = sy / sw;
        const double var = sxx / sw - mx * mx;
        const double slope = var > 1e-12 ? (sxy / sw - mx * my) / var : 0.0;
        out(i) = my + slope * (0.0 - mx);
    }
    return out;
}

namespace {

Vector periodic_seasonal(const Vector& detrended, int period) {
    Vector means = Vector::Zero(period);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(period);
    for (Eigen::Index t = 0; t < detrended.size(); ++t) {
        means(t % period) += detrended(t);
        counts(t % period) += 1;
    }
    means.array() /= counts.cast<double>().array();
    means.array() -= means.mean();
    Vector seasonal(detrended.size());
    for (Eigen::Index t = 0; t < detrended.size(); ++t) seasonal(t) = means(t % period);
    return seasonal;
}

void check_period(Eigen::Index length, int period) {
    if (period < 2) fail(ErrorKind::InvalidArgument, "seasonal period must be >= 2");
    if (length < 2 * Eigen::Index(period)) {
        fail(ErrorKind::PeriodTooLong, "series of length " + std::to_string(length) +
                                           " is shorter than two cycles of period " +
                                           std::to_string(period));
    }
}

}  // namespace

STLComponents stl_decompose(const Vector& values, int period, const StlOptions& options) {
    check_period(values.size(), period);
    const int span =
        options.trend_span > 0 ? options.trend_span : default_trend_span(period, values.size());

    Vector trend = Vector::Zero(values.size());
    Vector seasonal = Vector::Zero(values.size());
    for (int it = 0; it < std::max(1, options.inner_iterations); ++it) {
        seasonal = periodic_seasonal(values - trend, period);
        trend = loess_smooth(values - seasonal, span);
    }

    STLComponents out;
    out.remainder = values - trend - seasonal;
    out.trend = std::move(trend);
    out.seasonal.push_back(std::move(seasonal));
    out.periods = {period};
    return out;
}

STLComponents mstl_decompose(const Vector& values, std::vector<int> periods,
                             const StlOptions& options) {
    std::sort(periods.begin(), periods.end());
    STLComponents out;
    if (periods.empty()) {
        const int span = options.trend_span > 0 ? options.trend_span
                                                : default_trend_span(1, values.size());
        out.trend = loess_smooth(values, span);
        out.remainder = values - out.trend;
        return out;
    }
    for (int p : periods) check_period(values.size(), p);

    std::vector<Vector> seasonal(periods.size(), Vector::Zero(values.size()));
    Vector trend;
    constexpr int kPasses = 2;
    for (int pass = 0; pass < kPasses; ++pass) {
        for (std::size_t i = 0; i < periods.size(); ++i) {
            Vector others = Vector::Zero(values.size());
            for (std::size_t j = 0; j < periods.size(); ++j) {
                if (j != i) others += seasonal[j];
            }
            STLComponents c = stl_decompose(values - others, periods[i], options);
            seasonal[i] = std::move(c.seasonal.front());
            trend = std::move(c.trend);
        }
    }
    Vector total = Vector::Zero(values.size());
    for (const auto& s : seasonal) total += s;

    out.remainder = values - trend - total;
    out.trend = std::move(trend);
    out.seasonal = std::move(seasonal);
    out.periods = std::move(periods);
    return out;
}

}  // namespace lomef
