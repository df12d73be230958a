#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wrw/model.hpp"

namespace wrw::sim {

/// Reproducible stream layout: paths are partitioned into stream_count
/// contiguous batches and batch i draws from the substream derived from
/// (seed, i). Results are independent of how batches are scheduled.
struct RngStreamConfig {
    std::uint64_t seed = 0;
    std::uint32_t stream_count = 64;
};

struct SurvivalEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    std::uint64_t paths = 0;
    std::uint64_t survivors = 0;
    std::uint64_t horizon = 0;
    std::uint64_t seed = 0;
};

struct SimulateOptions {
    bool early_exit = true;  // stop each path at its first barrier violation
    unsigned threads = 0;    // 0 = hardware concurrency
};

/// Monte Carlo estimate of P(sup_{n<=horizon} Z_n <= barrier).
SurvivalEstimate simulate_survival(const model::WalkSpec& spec, std::uint64_t paths,
                                   const RngStreamConfig& rng,
                                   const SimulateOptions& opts = {});

/// One estimate per horizon from a single set of paths of length
/// max(horizons); a path contributes to every horizon it survives past.
std::vector<SurvivalEstimate> survival_curve(const model::WalkSpec& base,
                                             std::span<const std::uint64_t> horizons,
                                             std::uint64_t paths, const RngStreamConfig& rng,
                                             const SimulateOptions& opts = {});

/// Exact survival probability by depth-first enumeration of the support
/// tree. Requires a finite-support increment distribution and horizon <= 25.
double enumerate_exact(const model::WalkSpec& spec);

}  // namespace wrw::sim
