#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace lomef {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Ordinary least squares result. Coefficients exclude the intercept.
template <typename Scalar>
struct LinearFit {
    VectorX<Scalar> coefficients;
    Scalar intercept = Scalar(0);
    VectorX<Scalar> std_errors;
    Scalar intercept_std_error = Scalar(0);
    Scalar sse = Scalar(0);
    Eigen::Index n_obs = 0;
    bool ridge_fallback = false;

    /// Number of estimated mean parameters (coefficients plus intercept).
    Eigen::Index n_params(bool with_intercept) const {
        return coefficients.size() + (with_intercept ? 1 : 0);
    }
};

struct LinearFitOptions {
    bool intercept = true;
    /// Relative ridge added to the normal equations when the centred design is
    /// rank-deficient. The intercept is never penalised.
    double ridge = 1e-8;
    /// Column-pivoting QR threshold used to detect rank deficiency.
    double rank_threshold = 1e-10;
};

/// Least squares of y on the columns of X (plus an unpenalised intercept).
/// The design is centred first, so constant columns collapse to zero and the
/// ridge fallback leaves their coefficients at exactly zero.
template <typename DerivedX, typename DerivedY>
LinearFit<typename DerivedX::Scalar> fit_linear(const Eigen::MatrixBase<DerivedX>& X,
                                                const Eigen::MatrixBase<DerivedY>& y,
                                                const LinearFitOptions& options = {}) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();

    LinearFit<Scalar> fit;
    fit.n_obs = n;

    VectorX<Scalar> x_mean = VectorX<Scalar>::Zero(p);
    Scalar y_mean = Scalar(0);
    if (options.intercept && n > 0) {
        x_mean = X.colwise().mean().transpose();
        y_mean = y.mean();
    }
    const MatrixX<Scalar> Xc = X.rowwise() - x_mean.transpose();
    const VectorX<Scalar> yc = y.array() - y_mean;

    MatrixX<Scalar> gram = Xc.transpose() * Xc;
    if (p == 0) {
        fit.coefficients.resize(0);
    } else {
        Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(Xc);
        qr.setThreshold(Scalar(options.rank_threshold));
        if (qr.rank() < p) {
            fit.ridge_fallback = true;
            const Scalar mean_diag = gram.diagonal().mean();
            const Scalar lambda =
                Scalar(options.ridge) * (mean_diag > Scalar(0) ? mean_diag : Scalar(1));
            gram.diagonal().array() += lambda;
            fit.coefficients = gram.ldlt().solve(Xc.transpose() * yc);
        } else {
            fit.coefficients = qr.solve(yc);
        }
    }
    fit.intercept = options.intercept ? y_mean - x_mean.dot(fit.coefficients) : Scalar(0);

    const VectorX<Scalar> residuals = yc - Xc * fit.coefficients;
    fit.sse = residuals.squaredNorm();

    const Eigen::Index dof = n - p - (options.intercept ? 1 : 0);
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
    fit.std_errors = VectorX<Scalar>::Constant(p, nan);
    fit.intercept_std_error = nan;
    if (dof > 0) {
        const Scalar sigma2 = fit.sse / Scalar(dof);
        if (p > 0) {
            const MatrixX<Scalar> inv =
                gram.ldlt().solve(MatrixX<Scalar>::Identity(p, p));
            fit.std_errors = (sigma2 * inv.diagonal().array()).max(Scalar(0)).sqrt();
            if (options.intercept) {
                fit.intercept_std_error = std::sqrt(std::max(
                    Scalar(0), sigma2 * (Scalar(1) / Scalar(n) + x_mean.dot(inv * x_mean))));
            }
        } else if (options.intercept) {
            fit.intercept_std_error = std::sqrt(sigma2 / Scalar(n));
        }
    }
    return fit;
}

/// Gaussian AICc with k counting every estimated quantity (including the
/// noise variance). The residual variance is floored relative to `scale` so
/// that exact fits compare by parameter count instead of by rounding noise.
inline double aicc(double sse, Eigen::Index n, Eigen::Index k, double scale) {
    if (n - k - 1 <= 0) return std::numeric_limits<double>::infinity();
    const double floor = std::pow(1e-10 * std::max(scale, 1e-300), 2);
    const double sigma2 = std::max(sse / double(n), floor);
    const double kk = double(k);
    return double(n) * std::log(sigma2) + 2.0 * kk + 2.0 * kk * (kk + 1.0) / double(n - k - 1);
}

/// Gaussian AIC, floored in the same way as aicc().
inline double aic(double sse, Eigen::Index n, Eigen::Index k, double scale) {
    const double floor = std::pow(1e-10 * std::max(scale, 1e-300), 2);
    const double sigma2 = std::max(sse / double(n), floor);
    return double(n) * std::log(sigma2) + 2.0 * double(k);
}

}  // namespace lomef
