#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "lomef/config.hpp"
#include "lomef/dataset_io.hpp"
#include "lomef/report.hpp"
#include "lomef/synthetic.hpp"

using namespace lomef;
using testing::kind_of;
using testing::vec;

namespace {

SeriesSet parse(const std::string& text, LoadOptions options = {}) {
    std::istringstream in(text);
    return parse_dataset(in, "inline", options);
}

std::string message_of(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

const std::string kTwoSeries =
    "# horizon=2\n"
    "# seasonal_periods=2\n"
    "series_id,index,value\n"
    "a,1,1\na,2,2\na,3,3\na,4,4\na,5,5\na,6,6\n"
    "b,6,60\nb,5,50\nb,4,40\nb,3,30\nb,2,20\nb,1,10\n";

}  // namespace

TEST_CASE("well-formed dataset") {
    const auto set = parse(kTwoSeries);
    REQUIRE(set.series.size() == 2);
    CHECK(set.name == "inline");
    CHECK(set.series[0].id == "a");
    CHECK(set.series[1].values == vec({10, 20, 30, 40, 50, 60}));
    CHECK(set.series[1].horizon == 2);
    CHECK(set.series[1].seasonal_periods == std::vector<int>{2});
    CHECK(set.series[1].non_negative);
    CHECK_FALSE(set.series[1].is_count_data);

    const auto file = load_dataset(std::string(LOMEF_TEST_DATA_DIR) + "/small.csv");
    CHECK(file.name == "small");
    CHECK(file.series.size() == 3);
    CHECK(file.series[2].length() == 28);
}

TEST_CASE("dataset parse errors name the line") {
    std::string bad = kTwoSeries;
    bad.replace(bad.find("a,3,3"), 5, "a,3,x");
    CHECK(kind_of([&] { parse(bad); }) == ErrorKind::ParseError);
    CHECK(message_of(bad).find("line 6") != std::string::npos);

    CHECK(kind_of([] { parse("# horizon=1\na,1\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse("a,1,1\na,2,2\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse("# horizon=1\na,1,1\na,1,2\na,2,3\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse("# horizon=1\na,1,NA\na,2,2\na,3,3\n"); }) == ErrorKind::ParseError);
}

TEST_CASE("dataset validation errors") {
    CHECK(kind_of([] { parse("# horizon=2\n# horizon=3\na,1,1\na,2,2\na,3,3\na,4,4\n"); }) ==
          ErrorKind::ValidationError);
    CHECK(kind_of([] { parse("# horizon=1\na,1,1\na,2,2\na,4,3\n"); }) == ErrorKind::ValidationError);
    CHECK(kind_of([] { parse("# horizon=1\na,1,1\na,2,2\na,3,3\nb,1,1\nb,2,2\n"); }) ==
          ErrorKind::ValidationError);
    CHECK(kind_of([] { parse("# horizon=3\na,1,1\na,2,2\na,3,3\n"); }) == ErrorKind::ValidationError);
    CHECK(kind_of([] { parse("# horizon=1\n# non_negative=true\na,1,1\na,2,-2\na,3,3\n"); }) ==
          ErrorKind::ValidationError);
}

TEST_CASE("missing values can be imputed by seasonal position") {
    const std::string text = "# horizon=1\n# seasonal_periods=2\n"
                             "a,1,1\na,2,10\na,3,3\na,4,NA\na,5,5\na,6,30\na,7,7\na,8,\n";
    const auto set = parse(text, {true});
    CHECK(set.series[0].values(3) == 20.0);
    CHECK(set.series[0].values(7) == 20.0);
}

TEST_CASE("datasets round-trip through the writer") {
    SeriesSet set = make_synthetic_set({.n_series = 3, .length = 30, .period = 6, .horizon = 4});
    set.series[1].values(2) = 1.0 / 3.0;
    std::ostringstream out;
    write_dataset(out, set);
    const auto back = parse(out.str());
    REQUIRE(back.series.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.series[i].id == set.series[i].id);
        CHECK(back.series[i].values == set.series[i].values);
        CHECK(back.series[i].seasonal_periods == set.series[i].seasonal_periods);
        CHECK(back.series[i].horizon == 4);
    }
}

TEST_CASE("synthetic panel") {
    const SyntheticOptions opts{.n_series = 5, .length = 50, .period = 7, .horizon = 6};
    const auto a = make_synthetic_set(opts);
    const auto b = make_synthetic_set(opts);
    REQUIRE(a.series.size() == 5);
    CHECK(validate(a).empty());
    for (std::size_t i = 0; i < 5; ++i) CHECK(a.series[i].values == b.series[i].values);
    CHECK(a.series[0].values != a.series[1].values);
    CHECK(a.series[0].seasonal_periods == std::vector<int>{7});
    auto other = opts;
    other.seed = RngSeed{43};
    CHECK(make_synthetic_set(other).series[0].values != a.series[0].values);
}

TEST_CASE("config parsing") {
    std::istringstream in(
        "# comment\n"
        "dataset = data/x.csv\n"
        "gfm = mlp   # trailing comment\n"
        "methods = NF, nsieve\n"
        "explainers = ets,dhr_ar,pr\n"
        "bootstraps = 20\n"
        "seed = 99\n"
        "log_transform = false\n");
    const RunConfig c = parse_config(in);
    CHECK(c.dataset == "data/x.csv");
    CHECK(c.gfm == GfmKind::MLP);
    CHECK(c.methods == std::vector{NeighbourhoodMethod::NF, NeighbourhoodMethod::NSIEVE});
    CHECK(c.explainers == std::vector{ExplainerKind::ETS, ExplainerKind::DHR_AR, ExplainerKind::PR});
    CHECK(c.bootstraps == 20);
    CHECK(c.seed == 99);
    CHECK_FALSE(c.log_transform);
    CHECK(c.members_for(NeighbourhoodMethod::NF) == 1);
    CHECK(c.members_for(NeighbourhoodMethod::NSIEVE) == 20);

    std::istringstream again(to_text(c));
    CHECK(to_text(parse_config(again)) == to_text(c));
}

TEST_CASE("config errors") {
    auto parse_text = [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
    };
    CHECK(kind_of([&] { parse_text("dataset = a\ncolour = blue\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { parse_text("dataset = a\nbootstraps = many\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { parse_text("just words\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { parse_text("gfm = pooled_ar\n").check(); }) == ErrorKind::ValidationError);
    CHECK(kind_of([&] { parse_text("dataset = a\nbootstraps = 0\n").check(); }) ==
          ErrorKind::ValidationError);
    CHECK(kind_of([&] { parse_text("dataset = a\ngfm = external\n").check(); }) ==
          ErrorKind::ValidationError);
    CHECK(kind_of([] { parse_gfm("xgboost"); }) == ErrorKind::ParseError);
}

TEST_CASE("config paths are relative to the config file") {
    const RunConfig c = load_config(std::string(LOMEF_TEST_DATA_DIR) + "/small.cfg");
    CHECK(c.dataset == std::string(LOMEF_TEST_DATA_DIR) + "/small.csv");
    CHECK(c.explainers == std::vector{ExplainerKind::ETS, ExplainerKind::AR});
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1234567) == "0.123457");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-7) == "1e-07");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(250.0) == "250");
}
