#include <doctest.h>

#include "lomef/core.hpp"
#include "lomef/rng.hpp"

using namespace lomef;

namespace {

TimeSeries make(const std::string& id, int length, int horizon, std::vector<int> periods = {}) {
    TimeSeries s;
    s.id = id;
    s.values = Vector::LinSpaced(length, 1.0, double(length));
    s.horizon = horizon;
    s.seasonal_periods = std::move(periods);
    s.non_negative = true;
    return s;
}

bool flags_series(const std::vector<Violation>& v, const std::string& id) {
    for (const auto& x : v) {
        if (x.series_id == id) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("split takes the last h values as test") {
    const auto parts = split(make("a", 10, 2));
    CHECK(parts.train.size() == 8);
    CHECK(parts.test(0) == 9.0);
    CHECK(parts.test(1) == 10.0);
    Vector joined(10);
    joined << parts.train, parts.test;
    CHECK(joined == make("a", 10, 2).values);

    CHECK(split(make("nn5w", 105, 8)).train.size() == 97);
}

TEST_CASE("split rejects series not longer than the horizon") {
    TimeSeries s = make("a", 1, 1);
    s.values << 5.0;
    try {
        split(s);
        FAIL("expected SeriesTooShort");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SeriesTooShort);
    }
}

TEST_CASE("validate reports each broken series") {
    SeriesSet ok{"ok", {make("a", 30, 4, {4}), make("b", 30, 4, {4})}};
    CHECK(validate(ok).empty());
    CHECK(validate(ok) == validate(ok));

    SeriesSet bad_h{"h", {make("a", 30, 4), make("b", 30, 0)}};
    const auto v = validate(bad_h);
    CHECK(flags_series(v, "b"));
    CHECK_FALSE(flags_series(v, "a"));

    SeriesSet dup{"d", {make("x", 30, 4), make("x", 30, 4), make("x", 30, 4)}};
    int duplicates = 0;
    for (const auto& x : validate(dup)) duplicates += x.rule == "duplicate series id";
    CHECK(duplicates == 2);
}

TEST_CASE("validate checks periods, length and set consistency") {
    CHECK(flags_series(validate({"p", {make("a", 30, 4, {1})}}), "a"));
    CHECK(flags_series(validate({"p", {make("a", 30, 4, {12, 4})}}), "a"));
    CHECK(flags_series(validate({"p", {make("a", 27, 4, {12})}}), "a"));
    CHECK(validate({"p", {make("a", 28, 4, {12})}}).empty());
    CHECK(flags_series(validate({"p", {make("a", 30, 4), make("b", 31, 4)}}), "b"));
    CHECK(flags_series(validate({"p", {make("a", 30, 4, {4}), make("b", 30, 4, {6})}}), "b"));

    TimeSeries neg = make("n", 30, 4);
    neg.values(3) = -1.0;
    CHECK(flags_series(validate({"p", {neg}}), "n"));
}

TEST_CASE("rng streams are reproducible and derived seeds differ") {
    Rng a(RngSeed{7});
    Rng b(RngSeed{7});
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CHECK(derive_seed(RngSeed{1}, 0) != derive_seed(RngSeed{1}, 1));
    CHECK(derive_seed(RngSeed{1}, 3) == derive_seed(RngSeed{1}, 3));

    Rng c(RngSeed{11});
    for (int i = 0; i < 1000; ++i) {
        const auto k = c.uniform_index(5);
        CHECK(k < 5);
        const double u = c.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("mt19937_64 engine matches its published 10000th output") {
    // the standard fixes this value, so draws are identical on every platform
    Rng r(RngSeed{5489});
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = r.next();
    CHECK(x == 9981545732273789042ULL);
}
