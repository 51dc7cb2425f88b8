#include "lomef/core.hpp"

#include <algorithm>
#include <set>

namespace lomef {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::SeriesTooShort: return "SeriesTooShort";
        case ErrorKind::ZeroMean: return "ZeroMean";
        case ErrorKind::NegativeValue: return "NegativeValue";
        case ErrorKind::NonFiniteForecast: return "NonFiniteForecast";
        case ErrorKind::DivergedTraining: return "DivergedTraining";
        case ErrorKind::PeriodTooLong: return "PeriodTooLong";
        case ErrorKind::InvalidBlockLength: return "InvalidBlockLength";
        case ErrorKind::UnstableSieve: return "UnstableSieve";
        case ErrorKind::FitFailure: return "FitFailure";
        case ErrorKind::EmptyNeighbourhood: return "EmptyNeighbourhood";
        case ErrorKind::MixedKinds: return "MixedKinds";
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::EmptyGroup: return "EmptyGroup";
        case ErrorKind::DegenerateSample: return "DegenerateSample";
        case ErrorKind::TooFewRuns: return "TooFewRuns";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::ProtocolError: return "ProtocolError";
        case ErrorKind::Timeout: return "Timeout";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

int TimeSeries::max_period() const {
    if (seasonal_periods.empty()) return 1;
    return *std::max_element(seasonal_periods.begin(), seasonal_periods.end());
}

SplitSeries split(const TimeSeries& series) {
    const Eigen::Index T = series.length();
    const Eigen::Index h = series.horizon;
    if (h < 1) fail(ErrorKind::InvalidArgument, "horizon must be >= 1 for series " + series.id);
    if (T <= h) {
        fail(ErrorKind::SeriesTooShort, "series " + series.id + " has " + std::to_string(T) +
                                            " values, horizon " + std::to_string(h));
    }
    return {series.values.head(T - h), series.values.tail(h)};
}

std::vector<Violation> validate(const SeriesSet& set) {
    std::vector<Violation> out;
    std::set<std::string> seen;
    const TimeSeries* first = set.series.empty() ? nullptr : &set.series.front();

    for (const auto& s : set.series) {
        if (!seen.insert(s.id).second) out.push_back({s.id, "duplicate series id"});
        if (s.values.size() == 0) out.push_back({s.id, "values must be non-empty"});
        if (!s.values.allFinite()) out.push_back({s.id, "values must be finite"});
        if (s.horizon < 1) out.push_back({s.id, "horizon must be >= 1"});
        if (s.horizon >= 1 && s.values.size() > 0 && s.values.size() <= s.horizon) {
            out.push_back({s.id, "length must exceed the horizon"});
        }

        bool periods_ok = true;
        for (std::size_t i = 0; i < s.seasonal_periods.size(); ++i) {
            if (s.seasonal_periods[i] < 2) periods_ok = false;
            if (i > 0 && s.seasonal_periods[i] <= s.seasonal_periods[i - 1]) periods_ok = false;
        }
        if (!periods_ok) {
            out.push_back({s.id, "seasonal periods must be strictly increasing and >= 2"});
        }
        if (!s.seasonal_periods.empty() && s.horizon >= 1 &&
            s.values.size() < 2 * Eigen::Index(s.max_period()) + s.horizon) {
            out.push_back({s.id, "length must be >= 2 * max(seasonal_periods) + horizon"});
        }
        if (s.non_negative && s.values.size() > 0 && s.values.minCoeff() < 0) {
            out.push_back({s.id, "series flagged non-negative contains negative values"});
        }

        if (first && &s != first) {
            if (s.seasonal_periods != first->seasonal_periods) {
                out.push_back({s.id, "seasonal periods differ from the rest of the set"});
            }
            if (s.horizon != first->horizon) {
                out.push_back({s.id, "horizon differs from the rest of the set"});
            }
            if (s.values.size() != first->values.size()) {
                out.push_back({s.id, "length differs from the rest of the set"});
            }
        }
    }
    return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector from_std(const std::vector<double>& v) {
    return Eigen::Map<const Vector>(v.data(), Eigen::Index(v.size()));
}

}  // namespace lomef
