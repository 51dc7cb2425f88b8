#pragma once

#include "lomef/core.hpp"

namespace lomef {

/// Panel of series sharing one AR(2) noise process and one seasonal shape,
/// each with its own level, seasonal amplitude and innovation scale.
struct SyntheticOptions {
    int n_series = 40;
    int length = 120;
    int period = 12;
    int horizon = 12;
    double ar1 = 0.6;
    double ar2 = -0.25;
    double level = 50.0;
    double seasonal_amplitude = 8.0;
    double noise_sd = 2.0;
    RngSeed seed{42};
};

SeriesSet make_synthetic_set(const SyntheticOptions& options);

}  // namespace lomef
