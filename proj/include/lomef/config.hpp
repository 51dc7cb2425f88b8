#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lomef/explainers.hpp"
#include "lomef/neighbourhood.hpp"

namespace lomef {

enum class GfmKind { PooledAR, MLP, External, OracleStub };

std::string_view to_string(GfmKind kind);
GfmKind parse_gfm(std::string_view text);

/// Everything a `run` needs. Parsed from "key = value" lines; '#' starts a
/// comment. Lists are comma separated.
struct RunConfig {
    std::string dataset;
    GfmKind gfm = GfmKind::PooledAR;
    std::vector<NeighbourhoodMethod> methods{NeighbourhoodMethod::NF};
    std::vector<ExplainerKind> explainers{ExplainerKind::ETS};
    int bootstraps = 50;
    int block_length = 0;  ///< 0 = automatic
    std::uint64_t seed = 1;
    int runs = 1;
    std::string output_dir = "lomef_out";
    int horizon = 0;  ///< 0 = take the dataset's horizon
    double alpha = 0.05;
    int bonferroni_tests = 0;  ///< 0 = explainers x methods x 6 measures
    int sieve_order_max = 0;   ///< 0 = max(input window, 2 x largest period)
    int threads = 0;           ///< 0 = LOMEF_THREADS or 1

    bool mean_scale = true;
    bool log_transform = true;
    bool gfm_fourier = false;
    int gfm_fourier_k = 1;

    int mlp_hidden = 16;
    int mlp_epochs = 200;

    std::string external_command;
    int external_input_length = 0;  ///< 0 = ceil(1.5 * horizon)
    int external_timeout_ms = 5000;

    bool impute_missing = false;
    bool write_series_artifacts = true;
    bool plots = false;

    /// Throws ValidationError on inconsistent settings.
    void check() const;
    /// Bootstrap members actually used for a method (NF is always 1).
    int members_for(NeighbourhoodMethod method) const;
};

RunConfig parse_config(std::istream& in);
/// A relative dataset path is taken relative to the config file.
RunConfig load_config(const std::string& path);
std::string to_text(const RunConfig& config);

}  // namespace lomef
