// Seeded stochastic estimation: block-error simulation of complete codes and
// polarization-process path sampling. Trials and paths draw from per-index
// RNG streams and reduce through integer or index-ordered accumulators, so a
// given seed produces the same numbers at any thread count.

#pragma once

#include <cstdint>
#include <vector>

#include "mispolar/codec.hpp"
#include "mispolar/polarize.hpp"

namespace mispolar {

struct SimReport {
    std::int64_t trials = 0;
    std::int64_t block_errors = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;  // Wilson 95%
    double ci_hi = 0.0;
    std::uint64_t seed = 0;
    double genie_bound = 0.0;  // NaN when unknown
    double runtime_s = 0.0;
};

SimReport simulate_block_error(const PolarCode& code, const Bdmc& w, const Bdmc& v,
                               std::int64_t trials, std::uint64_t seed,
                               TiePolicy policy = TiePolicy::FairCoin, bool parallel = true);

struct TraceLevel {
    int depth = 0;
    std::int64_t alive = 0;  // paths not yet truncated at this depth
    double mean_i = 0.0, q10_i = 0.0, q50_i = 0.0, q90_i = 0.0;
    double mean_d = 0.0, q10_d = 0.0, q50_d = 0.0, q90_d = 0.0;
    double mean_z = 0.0, q10_z = 0.0, q50_z = 0.0, q90_z = 0.0;
    double mean_t = 0.0, q10_t = 0.0, q50_t = 0.0, q90_t = 0.0;
    double frac_pe_low = 0.0;   // Pe <= gamma
    double frac_mid = 0.0;      // Pe in (gamma, 1/2 - gamma)
    double frac_pe_high = 0.0;  // Pe >= 1/2 - gamma
};

struct PolarizationTrace {
    int depth = 0;
    std::int64_t paths = 0;
    std::uint64_t seed = 0;
    double gamma = 0.1;
    std::int64_t truncated_paths = 0;
    std::vector<TraceLevel> levels;
};

// Uniform i.i.d. sign paths through the transform tree; per-depth parameter
// samples summarized. Paths that exceed the budget are counted as truncated
// from the failing depth onward, never silently dropped.
PolarizationTrace sample_paths(const ChannelPair& p, int depth, std::int64_t paths,
                               std::uint64_t seed, double gamma, const SynthesisBudget& budget,
                               bool parallel = true);

// Wilson 95% score interval.
void wilson_interval(std::int64_t successes, std::int64_t trials, double& lo, double& hi);

}  // namespace mispolar
