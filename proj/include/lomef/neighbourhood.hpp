#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lomef/bootstrap.hpp"
#include "lomef/core.hpp"
#include "lomef/gfm.hpp"
#include "lomef/stl.hpp"

namespace lomef {

enum class NeighbourhoodMethod { NF, NSTL, NSIEVE };

std::string_view to_string(NeighbourhoodMethod method);
NeighbourhoodMethod parse_method(std::string_view text);

/// Series on which explainers are trained, together with the global model's
/// one-step fit of each of them.
struct Neighbourhood {
    NeighbourhoodMethod method = NeighbourhoodMethod::NF;
    std::vector<Vector> member_series;
    std::vector<Vector> member_fits;
    std::string source_id;
    RngSeed seed;
    int block_length = 0;
    /// Order of the sieve AR actually used (NSIEVE only).
    int sieve_order = 0;
    /// Decomposition behind the NSTL members (NSTL only).
    STLComponents decomposition;

    std::size_t size() const { return member_fits.size(); }
};

/// Neighbourhood-Fit: the single member is the global model's in-sample fit of
/// the training region. The fit is both input and target for the explainer.
Neighbourhood nf_neighbourhood(const GlobalModel& model, const TimeSeries& series);

struct BootstrapOptions {
    int members = 50;
    int block_length = 0;  ///< 0 = default_block_length()
    RngSeed seed;
};

/// STL-MBB neighbourhood over the training region: remainder resampled with
/// MBB and added back to trend + seasonal.
Neighbourhood nstl_neighbourhood(const GlobalModel& model, const TimeSeries& series,
                                 const BootstrapOptions& options);

/// Members from an already computed decomposition; exposed for tests that
/// need to control the remainder.
std::vector<Vector> nstl_members(const STLComponents& components, int members, int block_length,
                                 RngSeed seed, bool non_negative);

/// Sieve-MBB neighbourhood: AR fitted by AIC, residuals resampled with MBB and
/// fed through the fitted recursion.
Neighbourhood nsieve_neighbourhood(const GlobalModel& model, const TimeSeries& series,
                                   int ar_order_max, const BootstrapOptions& options);

/// Sieve members for a given AR model. When a regenerated path is unstable the
/// AR is refitted at order 1 and generation restarts; the order actually used
/// is written to `order_used`.
std::vector<Vector> nsieve_members(const Vector& values, const SieveModel& model, int members,
                                   int block_length, RngSeed seed, bool non_negative,
                                   int* order_used = nullptr);

}  // namespace lomef
