#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "lomef/bootstrap.hpp"
#include "lomef/gfm.hpp"
#include "lomef/neighbourhood.hpp"
#include "lomef/stl.hpp"

using namespace lomef;
using testing::kind_of;
using testing::vec;

namespace {

double sd(const Vector& v) {
    return std::sqrt((v.array() - v.mean()).square().sum() / double(v.size() - 1));
}

double correlation(const Vector& a, const Vector& b) {
    const Vector x = a.array() - a.mean();
    const Vector y = b.array() - b.mean();
    return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

/// True when `out` splits, at some alignment, into runs of at most l values
/// that are each a contiguous stretch of `in` (values of `in` are 1..T).
bool block_aligned(const Vector& out, int l) {
    for (int a = 0; a < l; ++a) {
        bool ok = true;
        for (Eigen::Index i = 1; i < out.size() && ok; ++i) {
            const bool boundary = (i - a) % l == 0;
            if (!boundary && out(i) != out(i - 1) + 1.0) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

TimeSeries seasonal_series(const std::string& id, int length, int horizon, int period) {
    TimeSeries s;
    s.id = id;
    s.values.resize(length);
    for (int t = 0; t < length; ++t) {
        s.values(t) = 20.0 + 0.1 * t + 3.0 * std::sin(2.0 * std::numbers::pi * t / period) +
                      0.5 * std::cos(1.3 * t * t);
    }
    s.horizon = horizon;
    s.seasonal_periods = {period};
    s.non_negative = true;
    return s;
}

}  // namespace

TEST_CASE("STL recovers a linear trend plus a period-4 pattern") {
    const double pattern[4] = {1, -1, 2, -2};
    Vector y(48);
    for (int t = 1; t <= 48; ++t) y(t - 1) = 0.1 * t + pattern[(t - 1) % 4];
    const auto c = stl_decompose(y, 4);
    CHECK(c.remainder.cwiseAbs().maxCoeff() <= 0.05 * sd(y));
    CHECK((c.trend + c.seasonal_sum() + c.remainder - y).cwiseAbs().maxCoeff() <= 1e-12);
    for (int t = 10; t < 38; ++t) CHECK(c.seasonal[0](t) == doctest::Approx(pattern[t % 4]).epsilon(0.05));
}

TEST_CASE("STL of a constant series") {
    const auto c = stl_decompose(Vector::Constant(24, 7.5), 4);
    CHECK((c.trend.array() - 7.5).abs().maxCoeff() <= 1e-9);
    CHECK(c.seasonal[0].cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(c.remainder.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("STL needs two full cycles") {
    CHECK(kind_of([] { stl_decompose(Vector::LinSpaced(5, 1, 5), 4); }) == ErrorKind::PeriodTooLong);
}

TEST_CASE("STL identity holds on arbitrary data") {
    Rng rng(RngSeed{42});
    for (int trial = 0; trial < 20; ++trial) {
        Vector y(60);
        for (auto& v : y) v = 100.0 * rng.normal();
        const auto c = mstl_decompose(y, {4, 12});
        CHECK((c.trend + c.seasonal_sum() + c.remainder - y).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(c.signal() == c.trend + c.seasonal_sum());
    }
}

TEST_CASE("MSTL separates two sinusoids") {
    const int T = 120;
    Vector s4(T), s12(T), y(T);
    for (int t = 0; t < T; ++t) {
        s4(t) = std::sin(2.0 * std::numbers::pi * t / 4.0);
        s12(t) = 2.0 * std::cos(2.0 * std::numbers::pi * t / 12.0);
        y(t) = 5.0 + 0.05 * t + s4(t) + s12(t);
    }
    const auto c = mstl_decompose(y, {12, 4});
    REQUIRE(c.periods == std::vector<int>{4, 12});
    CHECK(correlation(c.seasonal[0], s4) > 0.95);
    CHECK(correlation(c.seasonal[1], s12) > 0.95);
}

TEST_CASE("MSTL reductions") {
    const Vector y = seasonal_series("x", 48, 1, 6).values;
    const auto single = mstl_decompose(y, {6});
    const auto direct = stl_decompose(y, 6);
    CHECK((single.trend - direct.trend).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((single.seasonal[0] - direct.seasonal[0]).cwiseAbs().maxCoeff() <= 1e-12);

    const auto none = mstl_decompose(y, {});
    CHECK(none.seasonal.empty());
    CHECK(none.trend == loess_smooth(y, default_trend_span(1, y.size())));
    CHECK((none.trend + none.remainder - y).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("loess reproduces straight lines") {
    const Vector line = Vector::LinSpaced(30, -3.0, 12.0);
    for (int span : {3, 7, 15, 31, 45}) {
        CHECK((loess_smooth(line, span) - line).cwiseAbs().maxCoeff() <= 1e-9);
    }
    CHECK(default_trend_span(4, 48) == 7);
    CHECK(default_trend_span(12, 48) == 19);
    CHECK(default_trend_span(1, 40) == 11);
}

TEST_CASE("MBB with block length one resamples values") {
    const Vector in = vec({3, 1, 4, 1, 5, 9, 2, 6});
    Rng rng(RngSeed{1});
    for (int draw = 0; draw < 50; ++draw) {
        const Vector out = mbb(in, 1, rng);
        CHECK(out.size() == in.size());
        for (double v : out) CHECK(std::find(in.begin(), in.end(), v) != in.end());
    }
}

TEST_CASE("MBB with block length T rotates the series") {
    const Vector in = Vector::LinSpaced(7, 1, 7);
    Rng rng(RngSeed{2});
    for (int draw = 0; draw < 50; ++draw) {
        const Vector out = mbb(in, 7, rng);
        const auto k = Eigen::Index(out(0)) - 1;
        for (Eigen::Index i = 0; i < 7; ++i) CHECK(out(i) == in((i + k) % 7));
    }
}

TEST_CASE("MBB output is made of input blocks") {
    const Vector in = Vector::LinSpaced(6, 1, 6);
    Rng rng(RngSeed{3});
    for (int draw = 0; draw < 100; ++draw) CHECK(block_aligned(mbb(in, 2, rng), 2));

    const Vector long_in = Vector::LinSpaced(40, 1, 40);
    for (int l : {3, 5, 8, 13}) {
        for (int draw = 0; draw < 30; ++draw) CHECK(block_aligned(mbb(long_in, l, rng), l));
    }
    CHECK(kind_of([&] { mbb(in, 0, rng); }) == ErrorKind::InvalidBlockLength);
    CHECK(kind_of([&] { mbb(in, 7, rng); }) == ErrorKind::InvalidBlockLength);
}

TEST_CASE("default block length") {
    CHECK(default_block_length({7}, 100) == 14);
    CHECK(default_block_length({}, 100) == 8);
    CHECK(default_block_length({52}, 60) == 30);
    CHECK(default_block_length({7, 365}, 3) == 1);
}

TEST_CASE("sieve fit on a noiseless AR(1)") {
    Vector y(30);
    y(0) = 8.0;
    for (int t = 1; t < 30; ++t) y(t) = 1.0 + 0.5 * y(t - 1);
    const auto sieve = fit_sieve_order(y, 1);
    CHECK(sieve.coefficients(0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sieve.intercept == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sieve.residuals.size() == 29);
    CHECK(sieve.residuals.cwiseAbs().maxCoeff() < 1e-10);

    int order = 0;
    const auto members = nsieve_members(y, sieve, 10, 4, RngSeed{5}, true, &order);
    CHECK(order == 1);
    for (const auto& m : members) CHECK((m - y).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("an explosive sieve AR is refitted at order one") {
    Rng rng(RngSeed{8});
    Vector y(60);
    y(0) = 0.0;
    for (int t = 1; t < 60; ++t) y(t) = 0.3 * y(t - 1) + rng.normal();
    SieveModel explosive = fit_sieve_order(y, 2);
    explosive.coefficients << 1.6, 0.4;
    testing::WarningCapture warnings;
    int order = 0;
    const auto members = nsieve_members(y, explosive, 5, 4, RngSeed{1}, false, &order);
    CHECK(order == 1);
    CHECK(members.size() == 5);
    CHECK(warnings.contains("unstable"));
    for (const auto& m : members) CHECK(m.allFinite());
}

TEST_CASE("NF neighbourhood is the global model fit") {
    const TimeSeries s = seasonal_series("a", 60, 6, 12);
    const OracleStubModel oracle({"o", {s}}, 9);
    const auto hood = nf_neighbourhood(oracle, s);
    REQUIRE(hood.size() == 1);
    CHECK(hood.member_fits[0] == split(s).train.tail(54 - 9));
    CHECK(hood.member_series[0] == hood.member_fits[0]);
}

TEST_CASE("NF with a pooled AR reproduces noiseless data") {
    SeriesSet set{"geo", {}};
    for (int c = 0; c < 5; ++c) {
        TimeSeries s;
        s.id = std::to_string(c);
        s.values.resize(20);
        s.values(0) = 1.0;
        for (int t = 1; t < 20; ++t) s.values(t) = 0.5 * s.values(t - 1);
        s.horizon = 2;
        set.series.push_back(s);
    }
    const auto model = fit_pooled_ar(set, {1, 1}, std::nullopt, {true, false});
    const auto hood = nf_neighbourhood(model, set.series[0]);
    const Vector actual = split(set.series[0]).train.tail(17);
    CHECK((hood.member_fits[0] - actual).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("NSTL members") {
    const TimeSeries s = seasonal_series("a", 72, 6, 12);
    const OracleStubModel oracle({"o", {s}}, 9);

    STLComponents c = stl_decompose(split(s).train, 12);
    c.remainder.setZero();
    for (const auto& m : nstl_members(c, 20, 24, RngSeed{4}, false)) CHECK(m == c.signal());

    BootstrapOptions opts;
    opts.members = 100;
    opts.seed = RngSeed{77};
    const auto a = nstl_neighbourhood(oracle, s, opts);
    const auto b = nstl_neighbourhood(oracle, s, opts);
    CHECK(a.size() == 100);
    CHECK(a.block_length == 24);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.member_series[i] == b.member_series[i]);
        CHECK(a.member_series[i].size() == 66);
        CHECK(a.member_fits[i].size() == 57);
    }
    CHECK(a.member_series[0] != a.member_series[1]);
}

TEST_CASE("NSTL drops periods without two training cycles") {
    TimeSeries s = seasonal_series("a", 40, 4, 7);
    s.seasonal_periods = {7, 30};
    const OracleStubModel oracle({"o", {s}}, 6);
    testing::WarningCapture warnings;
    BootstrapOptions opts;
    opts.members = 3;
    const auto hood = nstl_neighbourhood(oracle, s, opts);
    CHECK(hood.decomposition.periods == std::vector<int>{7});
    CHECK(warnings.contains("30"));
}

TEST_CASE("NSIEVE neighbourhood") {
    const TimeSeries s = seasonal_series("a", 60, 6, 7);
    const OracleStubModel oracle({"o", {s}}, 9);
    BootstrapOptions opts;
    opts.members = 50;
    opts.seed = RngSeed{5};
    const auto hood = nsieve_neighbourhood(oracle, s, 14, opts);
    CHECK(hood.size() == 50);
    CHECK(hood.sieve_order >= 1);
    CHECK(hood.sieve_order <= 14);
    for (const auto& m : hood.member_series) {
        CHECK(m.size() == 54);
        CHECK(m.minCoeff() >= 0.0);
    }
}

TEST_CASE("neighbourhood method names") {
    CHECK(parse_method("nstl") == NeighbourhoodMethod::NSTL);
    CHECK(parse_method("NSieve") == NeighbourhoodMethod::NSIEVE);
    CHECK(to_string(NeighbourhoodMethod::NF) == "NF");
    CHECK(kind_of([] { parse_method("bogus"); }) == ErrorKind::ParseError);
}
