#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lomef {

enum class ErrorKind {
    InvalidArgument,
    SeriesTooShort,
    ZeroMean,
    NegativeValue,
    NonFiniteForecast,
    DivergedTraining,
    PeriodTooLong,
    InvalidBlockLength,
    UnstableSieve,
    FitFailure,
    EmptyNeighbourhood,
    MixedKinds,
    ZeroDenominator,
    LengthMismatch,
    EmptyGroup,
    DegenerateSample,
    TooFewRuns,
    ParseError,
    ValidationError,
    ProtocolError,
    Timeout,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can branch on the category without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace lomef
