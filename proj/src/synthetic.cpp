#include "lomef/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace lomef {

SeriesSet make_synthetic_set(const SyntheticOptions& options) {
    if (options.n_series < 1 || options.length < 1 || options.horizon < 1) {
        fail(ErrorKind::InvalidArgument, "synthetic set needs positive sizes");
    }
    constexpr int kBurnIn = 50;
    Rng rng(options.seed);
    SeriesSet set;
    set.name = "synthetic";
    const int width = int(std::to_string(options.n_series).size());
    for (int i = 0; i < options.n_series; ++i) {
        const double level = options.level * (0.8 + 0.4 * rng.uniform());
        const double amplitude = options.seasonal_amplitude * (0.5 + rng.uniform());
        const double sd = options.noise_sd * (0.5 + rng.uniform());

        double e1 = 0.0;
        double e2 = 0.0;
        for (int t = 0; t < kBurnIn; ++t) {
            const double e = options.ar1 * e1 + options.ar2 * e2 + sd * rng.normal();
            e2 = e1;
            e1 = e;
        }

        TimeSeries s;
        char id[32];
        std::snprintf(id, sizeof id, "s%0*d", width, i + 1);
        s.id = id;
        s.values.resize(options.length);
        for (int t = 1; t <= options.length; ++t) {
            const double e = options.ar1 * e1 + options.ar2 * e2 + sd * rng.normal();
            e2 = e1;
            e1 = e;
            double seasonal = 0.0;
            if (options.period >= 2) {
                const double angle = 2.0 * std::numbers::pi * double(t) / double(options.period);
                seasonal = std::sin(angle) + 0.4 * std::cos(2.0 * angle);
            }
            s.values(t - 1) = level + amplitude * seasonal + e;
        }
        if (options.period >= 2) s.seasonal_periods = {options.period};
        s.horizon = options.horizon;
        s.non_negative = s.values.minCoeff() >= 0.0;
        set.series.push_back(std::move(s));
    }
    return set;
}

}  // namespace lomef
