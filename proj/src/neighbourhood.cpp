#include "lomef/neighbourhood.hpp"

#include <string>

#include "lomef/bootstrap.hpp"
#include "lomef/log.hpp"

namespace lomef {

std::string_view to_string(NeighbourhoodMethod method) {
    switch (method) {
        case NeighbourhoodMethod::NF: return "NF";
        case NeighbourhoodMethod::NSTL: return "NSTL";
        case NeighbourhoodMethod::NSIEVE: return "NSIEVE";
    }
    return "?";
}

NeighbourhoodMethod parse_method(std::string_view text) {
    std::string upper(text);
    for (auto& c : upper) c = char(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "NF") return NeighbourhoodMethod::NF;
    if (upper == "NSTL") return NeighbourhoodMethod::NSTL;
    if (upper == "NSIEVE") return NeighbourhoodMethod::NSIEVE;
    fail(ErrorKind::ParseError, "unknown neighbourhood method '" + std::string(text) + "'");
}

namespace {

void fit_members(const GlobalModel& model, Neighbourhood& hood) {
    hood.member_fits.reserve(hood.member_series.size());
    for (const auto& member : hood.member_series) {
        hood.member_fits.push_back(model.one_step_fit(member));
    }
}

int resolve_block_length(int requested, const std::vector<int>& periods, Eigen::Index length) {
    const int l = requested > 0 ? requested : default_block_length(periods, length);
    return std::max(1, std::min<int>(l, int(length)));
}

RngSeed member_seed(RngSeed seed, int member) {
    return RngSeed{seed.value + std::uint64_t(member)};
}

}  // namespace

Neighbourhood nf_neighbourhood(const GlobalModel& model, const TimeSeries& series) {
    Neighbourhood hood;
    hood.method = NeighbourhoodMethod::NF;
    hood.source_id = series.id;
    Vector fit = one_step_fit(model, series);
    hood.member_series.push_back(fit);
    hood.member_fits.push_back(std::move(fit));
    return hood;
}

std::vector<Vector> nstl_members(const STLComponents& components, int members, int block_length,
                                 RngSeed seed, bool non_negative) {
    if (members < 1) fail(ErrorKind::InvalidArgument, "neighbourhood needs at least one member");
    const Vector signal = components.signal();
    std::vector<Vector> out;
    out.reserve(std::size_t(members));
    for (int i = 0; i < members; ++i) {
        Rng rng(member_seed(seed, i));
        Vector member = signal + mbb(components.remainder, block_length, rng);
        if (non_negative) member = member.cwiseMax(0.0);
        out.push_back(std::move(member));
    }
    return out;
}

Neighbourhood nstl_neighbourhood(const GlobalModel& model, const TimeSeries& series,
                                 const BootstrapOptions& options) {
    const Vector train = split(series).train;
    std::vector<int> periods;
    for (int p : series.seasonal_periods) {
        if (p < 2) continue;
        if (train.size() >= 2 * Eigen::Index(p)) {
            periods.push_back(p);
        } else {
            log::warn("series " + series.id + ": period " + std::to_string(p) +
                      " dropped from the NSTL decomposition (fewer than two cycles)");
        }
    }

    Neighbourhood hood;
    hood.method = NeighbourhoodMethod::NSTL;
    hood.source_id = series.id;
    hood.seed = options.seed;
    hood.decomposition = mstl_decompose(train, periods);
    hood.block_length = resolve_block_length(options.block_length, periods, train.size());
    hood.member_series = nstl_members(hood.decomposition, options.members, hood.block_length,
                                      options.seed, series.non_negative);
    fit_members(model, hood);
    return hood;
}

std::vector<Vector> nsieve_members(const Vector& values, const SieveModel& model, int members,
                                   int block_length, RngSeed seed, bool non_negative,
                                   int* order_used) {
    if (members < 1) fail(ErrorKind::InvalidArgument, "neighbourhood needs at least one member");
    SieveModel current = model;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const int l = std::max(1, std::min<int>(block_length, int(current.residuals.size())));
        std::vector<Vector> out;
        out.reserve(std::size_t(members));
        try {
            for (int i = 0; i < members; ++i) {
                Rng rng(member_seed(seed, i));
                Vector member = sieve_regenerate(values, current, mbb(current.residuals, l, rng));
                if (non_negative) member = member.cwiseMax(0.0);
                out.push_back(std::move(member));
            }
            if (order_used) *order_used = current.order;
            return out;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::UnstableSieve || attempt > 0) throw;
            log::warn("unstable sieve AR(" + std::to_string(current.order) +
                      "), refitting with order 1");
            current = fit_sieve_order(values, 1);
        }
    }
    fail(ErrorKind::UnstableSieve, "sieve regeneration unstable after order-1 refit");
}

Neighbourhood nsieve_neighbourhood(const GlobalModel& model, const TimeSeries& series,
                                   int ar_order_max, const BootstrapOptions& options) {
    const Vector train = split(series).train;
    const SieveModel sieve = fit_sieve(train, ar_order_max);

    Neighbourhood hood;
    hood.method = NeighbourhoodMethod::NSIEVE;
    hood.source_id = series.id;
    hood.seed = options.seed;
    hood.block_length =
        resolve_block_length(options.block_length, series.seasonal_periods, train.size());
    hood.member_series = nsieve_members(train, sieve, options.members, hood.block_length,
                                        options.seed, series.non_negative, &hood.sieve_order);
    fit_members(model, hood);
    return hood;
}

}  // namespace lomef
