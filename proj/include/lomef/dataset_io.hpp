#pragma once

#include <iosfwd>
#include <string>

#include "lomef/core.hpp"

namespace lomef {

struct LoadOptions {
    /// Fill "NA"/empty cells with the median of the same seasonal position
    /// (first declared period, 7 when non-seasonal). Otherwise they are a
    /// parse error.
    bool impute_missing = false;
};

/// Long-form CSV:
///
///   # seasonal_periods=24,168
///   # horizon=96
///   # count_data=false
///   series_id,index,value
///   a,1,10.5
///   ...
///
/// Optional header keys: name, non_negative (inferred from the data when
/// absent). An optional "series_id,index,value" column header is skipped.
/// Indices must run 1..T per series. The result is validated; ragged sets are
/// rejected.
SeriesSet load_dataset(const std::string& path, const LoadOptions& options = {});
SeriesSet parse_dataset(std::istream& in, const std::string& name, const LoadOptions& options = {});

void write_dataset(std::ostream& out, const SeriesSet& set);

}  // namespace lomef
