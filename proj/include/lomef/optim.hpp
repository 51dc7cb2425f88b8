#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace lomef {

struct NelderMeadOptions {
    int max_iterations = 500;
    /// Stop once (f_worst - f_best) <= tolerance * (|f_best| + 1e-300).
    double tolerance = 1e-8;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimiser. `step` sets the size of the initial
/// simplex along each axis. Non-finite objective values are treated as +inf.
template <typename Objective>
NelderMeadResult nelder_mead(Objective&& f, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& step, const NelderMeadOptions& options = {}) {
    const Eigen::Index dim = x0.size();
    auto eval = [&](const Eigen::VectorXd& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<Eigen::VectorXd> simplex(dim + 1, x0);
    std::vector<double> values(dim + 1);
    for (Eigen::Index i = 0; i < dim; ++i) simplex[i + 1](i) += step(i);
    for (Eigen::Index i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

    std::vector<Eigen::Index> order(dim + 1);
    NelderMeadResult result;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), Eigen::Index(0));
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
        const double best = values[order.front()];
        const double worst = values[order.back()];
        if (std::isfinite(worst) &&
            worst - best <= options.tolerance * (std::abs(best) + 1e-300)) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) centroid += simplex[order[i]];
        centroid /= double(dim);

        const Eigen::Index hi = order.back();
        const Eigen::Index second = order[dim - 1];
        const Eigen::VectorXd reflected = centroid + (centroid - simplex[hi]);
        const double f_reflected = eval(reflected);

        if (f_reflected < best) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[hi]);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                simplex[hi] = expanded;
                values[hi] = f_expanded;
            } else {
                simplex[hi] = reflected;
                values[hi] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second]) {
            simplex[hi] = reflected;
            values[hi] = f_reflected;
            continue;
        }

        const bool outside = f_reflected < values[hi];
        const Eigen::VectorXd contracted =
            outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                    : Eigen::VectorXd(centroid + 0.5 * (simplex[hi] - centroid));
        const double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : values[hi])) {
            simplex[hi] = contracted;
            values[hi] = f_contracted;
            continue;
        }

        // shrink towards the best vertex
        const Eigen::VectorXd anchor = simplex[order.front()];
        for (Eigen::Index i = 1; i <= dim; ++i) {
            const Eigen::Index j = order[i];
            simplex[j] = anchor + 0.5 * (simplex[j] - anchor);
            values[j] = eval(simplex[j]);
        }
    }

    const auto best_it = std::min_element(values.begin(), values.end());
    const auto best_index = std::distance(values.begin(), best_it);
    result.x = simplex[best_index];
    result.value = *best_it;
    result.iterations = iter;
    return result;
}

/// Maps an unconstrained real onto (lo, hi).
inline double to_interval(double u, double lo, double hi) {
    return lo + (hi - lo) / (1.0 + std::exp(-u));
}

/// Inverse of to_interval() for x strictly inside (lo, hi).
inline double from_interval(double x, double lo, double hi) {
    const double p = std::clamp((x - lo) / (hi - lo), 1e-9, 1.0 - 1e-9);
    return std::log(p / (1.0 - p));
}

}  // namespace lomef
