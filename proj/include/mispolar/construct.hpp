// Information-set construction and the improving lower-bound family on the
// polar mismatched capacity.
//
// The exact forms rank fully synthesized level-n statistics and can hit the
// synthesis budget on channels whose alphabets blow up; construct_genie_mc is
// the statistical fallback for those blocklengths, ranking indices by
// genie-aided per-bit error estimates from seeded Monte Carlo.

#pragma once

#include <cstdint>

#include "mispolar/codec.hpp"
#include "mispolar/construct_types.hpp"
#include "mispolar/polarize.hpp"

namespace mispolar {

// info_set = { i : I(W_N^(i)) >= 1 - gamma }, gamma in (0,1).
PolarCode info_set_matched_threshold(const Bdmc& w, int n, double gamma, const SynthesisBudget& budget);

// k indices of smallest Z(W_N^(i)), ties to the smaller index.
PolarCode info_set_matched_size(const Bdmc& w, int n, long k, const SynthesisBudget& budget);

// info_set = { i : Pe_ML(W_N^(i), V_N^(i)) <= gamma }, gamma in (0, 1/2).
PolarCode info_set_mismatched_threshold(const ChannelPair& p, int n, double gamma,
                                        const SynthesisBudget& budget);

// k smallest Pe_ML, ties by smaller Z(W,V) then smaller index.
PolarCode info_set_mismatched_size(const ChannelPair& p, int n, long k, const SynthesisBudget& budget);

// Rank by Monte Carlo genie per-bit error estimates (ties to smaller index);
// genie_bound is the estimated sum over the chosen set.
PolarCode construct_genie_mc(const Bdmc& w, const Bdmc& v, int n, long k, std::int64_t trials,
                             std::uint64_t seed);

// L_n = 2^-n sum_s max(I(W^s, V^s), 0) for n = 0..max_n. Infinite-I pairs
// yield an all-zero ledger; running out of budget truncates and flags it.
BoundLedger lower_bound_family(const ChannelPair& p, int max_n, const SynthesisBudget& budget,
                               bool parallel = true);

}  // namespace mispolar
