// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lomef/bootstrap.hpp"
#include "lomef/config.hpp"
#include "lomef/dataset_io.hpp"
#include "lomef/evaluation.hpp"
#include "lomef/explainers.hpp"
#include "lomef/gfm.hpp"
#include "lomef/log.hpp"
#include "lomef/pipeline.hpp"
#include "lomef/stats.hpp"
#include "lomef/stl.hpp"
#include "lomef/synthetic.hpp"

using namespace lomef;
namespace fs = std::filesystem;
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

namespace tol {
constexpr double kCoefficient = 1e-8;
constexpr double kStlIdentity = 1e-9;
constexpr double kStlRemainderShare = 0.05;
constexpr double kPValue = 1e-6;
constexpr double kMetric = 1e-12;
}  // namespace tol

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int number;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> check;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// --- 1 -------------------------------------------------------------------------

Outcome measure_identities() {
    Rng rng(RngSeed{101});
    // multiples of 1/256 below 16: every difference below is exact in binary64
    auto draw = [&] { return double(rng.uniform_index(4096)) / 256.0; };
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const PrimaryErrors p{draw(), draw(), draw(), draw(), draw(), draw()};
        const auto s = secondary_measures(p);
        if (s.acc_explainer_globalmodel != s.acc_explainer_localmodel - s.acc_global_localmodel) ++failures;
        if (s.fidelity_actual - s.fidelity_local != p.global_local - p.actual_global) ++failures;
    }
    return {failures == 0, std::to_string(failures) + " identity violations in 1000 instances"};
}

// --- 2 -------------------------------------------------------------------------

Outcome oracle_stub() {
    const SeriesSet data = make_synthetic_set({.n_series = 20, .length = 120, .period = 12, .horizon = 12});
    RunConfig config;
    config.dataset = "synthetic";
    config.gfm = GfmKind::OracleStub;
    config.methods = {NeighbourhoodMethod::NF};
    config.explainers = {ExplainerKind::ETS, ExplainerKind::THETA, ExplainerKind::AR};
    config.threads = 1;
    const RunResult result = run_pipeline(config, data);
    int nonzero = 0;
    for (const auto& r : result.records) nonzero += r.secondary.fidelity_local != 0.0;
    const std::size_t expected = 20 * 3 * kAllMetrics.size();
    return {nonzero == 0 && result.records.size() == expected && result.errors.empty(),
            std::to_string(result.records.size()) + " records, " + std::to_string(nonzero) +
                " with non-zero Fidelity_Local, " + std::to_string(result.errors.size()) + " errors"};
}

// --- 3 -------------------------------------------------------------------------

// Normal equations [1, lags]'[1, lags] b = [1, lags]'y by Gauss-Jordan with
// partial pivoting in long double. Returns (intercept, lag coefficients...).
std::vector<long double> normal_equations(const std::vector<Vector>& series, int p) {
    const int k = p + 1;
    std::vector<std::vector<long double>> a(std::size_t(k), std::vector<long double>(std::size_t(k + 1), 0.0L));
    for (const auto& y : series) {
        for (Eigen::Index t = p; t < y.size(); ++t) {
            std::vector<long double> x(static_cast<std::size_t>(k));
            x[0] = 1.0L;
            for (int j = 1; j <= p; ++j) x[std::size_t(j)] = y(t - j);
            for (int r = 0; r < k; ++r) {
                for (int c = 0; c < k; ++c) a[r][c] += x[r] * x[c];
                a[r][k] += x[r] * (long double)y(t);
            }
        }
    }
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            const long double f = a[r][col] / a[col][col];
            for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<long double> b(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) b[r] = a[r][k] / a[r][r];
    return b;
}

Vector simulate_ar(const std::vector<double>& phi, double c, int length, Rng& rng) {
    Vector y(length);
    const int p = int(phi.size());
    for (int t = 0; t < p; ++t) y(t) = 5.0 * rng.normal();
    for (int t = p; t < length; ++t) {
        double v = c;
        for (int j = 0; j < p; ++j) v += phi[std::size_t(j)] * y(t - 1 - j);
        y(t) = v;
    }
    return y;
}

Outcome ar_oracle() {
    Rng rng(RngSeed{303});
    double worst = 0.0;
    int order_misses = 0;
    auto away_from_zero = [&](double lo, double hi) {
        const double r = lo + (hi - lo) * rng.uniform();
        return rng.uniform() < 0.5 ? -r : r;
    };
    for (int instance = 0; instance < 50; ++instance) {
        const int p = instance % 2 + 1;
        std::vector<double> phi;
        if (p == 1) {
            phi = {away_from_zero(0.2, 0.9)};
        } else {
            const double r1 = away_from_zero(0.2, 0.9);
            const double r2 = away_from_zero(0.2, 0.9);
            phi = {r1 + r2, -r1 * r2};
        }
        const double c = 2.0 * rng.uniform() - 1.0;

        SeriesSet set{"ar", {}};
        std::vector<Vector> values;
        for (int s = 0; s < 5; ++s) {
            TimeSeries ts;
            ts.id = "s" + std::to_string(s);
            ts.values = simulate_ar(phi, c, 40, rng);
            ts.horizon = 1;
            values.push_back(ts.values);
            set.series.push_back(std::move(ts));
        }

        // pooled: trained on the training parts, so the oracle sees the same rows
        std::vector<Vector> train;
        for (const auto& s : set.series) train.push_back(split(s).train);
        const auto pooled = fit_pooled_ar(set, {p, 1}, std::nullopt, {false, false});
        const auto oracle = normal_equations(train, p);
        worst = std::max(worst, std::abs(pooled.intercept() - double(oracle[0])));
        for (int j = 0; j < p; ++j) {
            worst = std::max(worst, std::abs(pooled.coefficients()(j) - double(oracle[std::size_t(j + 1)])));
        }

        const auto local = fit_ar_local(values[0], p);
        if (local.order != p) {
            ++order_misses;
            continue;
        }
        const auto local_oracle = normal_equations({values[0]}, p);
        worst = std::max(worst, std::abs(local.intercept - double(local_oracle[0])));
        for (int j = 0; j < p; ++j) {
            worst = std::max(worst, std::abs(local.coefficients(j) - double(local_oracle[std::size_t(j + 1)])));
        }
    }
    return {worst <= tol::kCoefficient && order_misses == 0,
            "max |coef - oracle| = " + fmt("%.3g", worst) + ", AIC order misses " +
                std::to_string(order_misses)};
}

// --- 4 -------------------------------------------------------------------------

Outcome stl_contract() {
    Rng rng(RngSeed{404});
    double worst_identity = 0.0;
    int cases = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int period = 2 + int(rng.uniform_index(23));
        const int length = 2 * period + int(rng.uniform_index(120));
        Vector y(length);
        const double scale = std::pow(10.0, double(rng.uniform_index(7)) - 3.0);
        for (auto& v : y) v = scale * (rng.normal() + 3.0 * rng.uniform());
        const auto single = stl_decompose(y, period);
        worst_identity = std::max(
            worst_identity, (single.trend + single.seasonal_sum() + single.remainder - y).cwiseAbs().maxCoeff());
        std::vector<int> periods{period};
        if (length >= 4 * period) periods.push_back(2 * period);
        const auto multi = mstl_decompose(y, periods);
        worst_identity = std::max(
            worst_identity, (multi.trend + multi.seasonal_sum() + multi.remainder - y).cwiseAbs().maxCoeff());
        cases += 2;
    }

    const double pattern[4] = {1, -1, 2, -2};
    Vector y(48);
    for (int t = 1; t <= 48; ++t) y(t - 1) = 0.1 * t + pattern[(t - 1) % 4];
    const auto c = stl_decompose(y, 4);
    const double sd = std::sqrt((y.array() - y.mean()).square().sum() / double(y.size() - 1));
    const double share = c.remainder.cwiseAbs().maxCoeff() / sd;
    return {worst_identity <= tol::kStlIdentity && share <= tol::kStlRemainderShare,
            std::to_string(cases) + " decompositions, identity error " + fmt("%.3g", worst_identity) +
                ", max|r|/sd(y) = " + fmt("%.4f", share)};
}

// --- 5 -------------------------------------------------------------------------

// Some alignment splits `out` into runs of at most l consecutive input positions.
bool aligned_blocks(const std::vector<Eigen::Index>& positions, int l) {
    for (int a = 0; a < l; ++a) {
        bool ok = true;
        for (std::size_t i = 1; i < positions.size() && ok; ++i) {
            if ((int(i) - a) % l != 0 && positions[i] != positions[i - 1] + 1) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

Outcome mbb_structure() {
    const int T = 48, s = 12;
    Rng values_rng(RngSeed{505});
    Vector in(T);
    std::map<double, Eigen::Index> where;
    for (Eigen::Index i = 0; i < T; ++i) {
        in(i) = 100.0 * values_rng.normal();
        where[in(i)] = i;
    }
    int draws = 0, length_errors = 0, block_errors = 0, rotation_errors = 0;
    for (int l : {1, 2, s, T}) {
        for (int d = 0; d < 50; ++d, ++draws) {
            Rng rng(derive_seed(RngSeed{5}, std::uint64_t(draws)));
            const Vector out = mbb(in, l, rng);
            if (out.size() != T) {
                ++length_errors;
                continue;
            }
            std::vector<Eigen::Index> pos;
            for (double v : out) pos.push_back(where.at(v));
            if (!aligned_blocks(pos, l)) ++block_errors;
            if (l == T) {
                for (Eigen::Index i = 0; i < T; ++i) {
                    if (pos[std::size_t(i)] != (pos[0] + i) % T) {
                        ++rotation_errors;
                        break;
                    }
                }
            }
        }
    }
    return {length_errors + block_errors + rotation_errors == 0,
            std::to_string(draws) + " draws; length errors " + std::to_string(length_errors) +
                ", block errors " + std::to_string(block_errors) + ", rotation errors " +
                std::to_string(rotation_errors)};
}

// --- 6 and 7 -----------------------------------------------------------------

SeriesSet desk_suite() { return make_synthetic_set({}); }

RunConfig desk_config() {
    RunConfig c;
    c.dataset = "synthetic";
    c.gfm = GfmKind::PooledAR;
    c.methods = {NeighbourhoodMethod::NF, NeighbourhoodMethod::NSTL, NeighbourhoodMethod::NSIEVE};
    c.explainers = {ExplainerKind::ETS, ExplainerKind::AR};
    c.threads = 1;
    return c;
}

Outcome sign_pattern() {
    const RunResult result = run_pipeline(desk_config(), desk_suite());
    int combos = 0, violations = 0;
    std::string first_violation;
    for (const auto& row : result.aggregate) {
        if (row.statistic != "mean") continue;
        ++combos;
        const double fa = row.values[0];
        const double agl = row.values[3];
        if (!(fa < 0.0) || !(agl < 0.0)) {
            if (violations++ == 0) {
                first_violation = std::string(to_string(row.method)) + "/" +
                                  std::string(to_string(row.explainer)) + "/" +
                                  std::string(to_string(row.metric)) + " (" + fmt("%.4g", fa) + ", " +
                                  fmt("%.4g", agl) + ")";
            }
        }
    }
    std::string detail = std::to_string(combos) + " combinations, " + std::to_string(violations) +
                         " with a non-negative mean";
    if (!first_violation.empty()) detail += "; first: " + first_violation;
    return {combos == 18 && violations == 0 && result.errors.empty(), detail};
}

Outcome stability() {
    const SeriesSet data = desk_suite();
    int nf_nonzero = 0, nf_rows = 0, favourable = 0;
    std::string medians;
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
        RunConfig config = desk_config();
        config.seed = 1 + rep;
        const StabilityResult result = run_stability(config, data, 10);
        std::vector<double> nstl, nsieve;
        for (const auto& row : result.rows) {
            if (row.method == NeighbourhoodMethod::NF) {
                ++nf_rows;
                nf_nonzero += row.iqr != 0.0;
            } else if (row.method == NeighbourhoodMethod::NSTL) {
                nstl.push_back(row.iqr);
            } else {
                nsieve.push_back(row.iqr);
            }
        }
        const double a = median(nstl), b = median(nsieve);
        favourable += a <= b;
        medians += (rep ? "; " : "") + fmt("%.4g", a) + " vs " + fmt("%.4g", b);
    }
    return {nf_nonzero == 0 && nf_rows == 3 * 6 && favourable >= 2,
            "NF rows with non-zero IQR " + std::to_string(nf_nonzero) + "/" + std::to_string(nf_rows) +
                "; median IQR NSTL vs NSieve: " + medians + " (" + std::to_string(favourable) +
                "/3 favour NSTL)"};
}

// --- 8 -------------------------------------------------------------------------

double oracle_p_less_than_zero(const std::vector<double>& samples) {
    const std::size_t n = samples.size();
    HighPrecision mean = 0;
    for (double x : samples) mean += x;
    mean /= n;
    HighPrecision ss = 0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const HighPrecision sd = boost::multiprecision::sqrt(ss / (n - 1));
    const HighPrecision t = mean / (sd / boost::multiprecision::sqrt(HighPrecision(n)));
    const HighPrecision dof = n - 1;
    const HighPrecision tail = boost::math::ibeta(dof / 2, HighPrecision(0.5), dof / (dof + t * t)) / 2;
    return static_cast<double>(t < 0 ? tail : 1 - tail);
}

Outcome statistics() {
    const double level = bonferroni(0.05, 300);
    char shown[32];
    std::snprintf(shown, sizeof shown, "%.4e", level);
    const bool bonferroni_ok = std::string(shown) == "1.6667e-04";

    Rng rng(RngSeed{808});
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + int(rng.uniform_index(60));
        const double shift = 1.5 * (rng.uniform() - 0.5);
        const double spread = 0.1 + 3.0 * rng.uniform();
        std::vector<double> samples;
        for (int j = 0; j < n; ++j) samples.push_back(shift + spread * rng.normal());
        worst = std::max(worst, std::abs(t_test_less_than_zero(samples).p - oracle_p_less_than_zero(samples)));
    }
    return {bonferroni_ok && worst <= tol::kPValue,
            std::string("bonferroni(0.05, 300) = ") + shown + ", max |p - oracle| = " + fmt("%.3g", worst)};
}

// --- 9 -------------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream content;
        content << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = content.str();
    }
    return files;
}

int run_cli(const std::string& env, const std::string& args) {
    const std::string cmd = env + " " + LOMEF_CLI_PATH + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
    const fs::path dir = fs::temp_directory_path() / "lomef_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream data(dir / "data.csv");
        write_dataset(data, make_synthetic_set({.n_series = 20, .length = 96, .period = 12, .horizon = 12}));
        std::ofstream cfg(dir / "run.cfg");
        cfg << "dataset = data.csv\n"
               "gfm = pooled_ar\n"
               "methods = nf,nstl,nsieve\n"
               "explainers = ets,theta,stl_ets,dhr_ar,ar,pr\n"
               "bootstraps = 20\n"
               "seed = 11\n"
               "output_dir = out\n";
    }
    const std::string config = (dir / "run.cfg").string();
    const fs::path out = dir / "out";
    std::vector<std::map<std::string, std::string>> bundles;
    std::vector<int> codes;
    for (const char* threads : {"1", "1", "8"}) {
        fs::remove_all(out);
        codes.push_back(run_cli(std::string("LOMEF_THREADS=") + threads, "run " + config + " -o " + out.string()));
        bundles.push_back(read_tree(out));
    }
    fs::remove_all(dir);
    const bool codes_ok = std::all_of(codes.begin(), codes.end(), [](int c) { return c == 0; });
    const bool same = bundles[0] == bundles[1] && bundles[0] == bundles[2];
    return {codes_ok && same && bundles[0].size() > 4,
            std::to_string(bundles[0].size()) + " files per bundle; repeat " +
                (bundles[0] == bundles[1] ? "identical" : "DIFFERENT") + ", 1 vs 8 threads " +
                (bundles[0] == bundles[2] ? "identical" : "DIFFERENT")};
}

// --- 10 ------------------------------------------------------------------------

Outcome metric_spot_checks() {
    const Vector train = from_std({1, 2, 3, 4});
    const double mase = metric(MetricKind::MASE, from_std({5, 6}), from_std({4, 4}), train, 1);
    const double rmse = metric(MetricKind::RMSE, from_std({0, 0}), from_std({3, 4}), train, 1);
    const double mae = metric(MetricKind::MAE, from_std({0, 0}), from_std({3, 4}), train, 1);
    const double worst = std::max({std::abs(mase - 1.5), std::abs(rmse - std::sqrt(12.5)), std::abs(mae - 3.5)});
    return {worst <= tol::kMetric, "MASE " + fmt("%.15g", mase) + ", RMSE " + fmt("%.15g", rmse) +
                                       ", MAE " + fmt("%.15g", mae)};
}

}  // namespace

int main() {
    // warnings from individual fits are expected and would drown the report
    log::ScopedSink quiet([](log::Level, std::string_view) {});

    const std::vector<Criterion> criteria{
        {1, "measure identities", 1.0, measure_identities},
        {2, "perfect-oracle stub", 30.0, oracle_stub},
        {3, "AR oracle equivalence", 10.0, ar_oracle},
        {4, "STL contract", 5.0, stl_contract},
        {5, "MBB structure", 5.0, mbb_structure},
        {6, "desk-scale sign pattern", 180.0, sign_pattern},
        {7, "stability", 300.0, stability},
        {8, "statistics", 5.0, statistics},
        {9, "determinism", 180.0, determinism},
        {10, "metric spot checks", 1.0, metric_spot_checks},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool pass = outcome.ok && in_time;
        failed += !pass;
        std::printf("%s %2d %-26s %8.3f s (limit %g s%s)  %s\n", pass ? "PASS" : "FAIL", c.number,
                    c.name.c_str(), seconds, c.limit_seconds, in_time ? "" : ", exceeded",
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
