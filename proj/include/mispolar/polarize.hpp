// One-step and recursive polar transforms on channel pairs, exact up to
// symbol merging on (dw, dv). Merging on the delta pair is lossless for every
// tracked parameter: they are all expectations of functions of (dw, dv)
// under q. Sign sequences map to channel indices i = 1 + sum b_j 2^(n-j),
// b_j = 1 for '+', with s_1 the first transform applied.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mispolar/mismatch.hpp"

namespace mispolar {

enum class Sign : std::uint8_t { Minus = 0, Plus = 1 };

using SignSequence = std::vector<Sign>;

long index_of(const SignSequence& signs);
SignSequence signs_of(long index, int n);
std::string signs_to_string(const SignSequence& signs);

struct SynthesisBudget {
    std::size_t max_symbols = std::size_t{1} << 20;  // post-merge alphabet cap per pair
    double merge_tol = 1e-12;
};

// W-(y1 y2 | u1): q' = q1 q2, dw' = dw1 dw2, dv' = dv1 dv2, then canonicalize.
ChannelPair minus_transform(const ChannelPair& p, const SynthesisBudget& budget);

// W+(y1 y2 u1 | u2): q' = q1 q2 (1 + s dw1 dw2)/2 with s = (-1)^u1,
// dw' = (s dw1 + dw2)/(1 + s dw1 dw2) and the same recursion for dv.
// Zero W-denominators carry zero mass and are dropped; a zero V-denominator
// alone yields an undefined dv (NaN), the decoder-tie case.
ChannelPair plus_transform(const ChannelPair& p, const SynthesisBudget& budget);

// Fold of minus/plus along the sign sequence, first sign applied first.
// BudgetExceededError carries the failing depth.
ChannelPair synthesize(const ChannelPair& p, const SignSequence& signs, const SynthesisBudget& budget);

// All 2^n level-n pairs ordered by index, computed breadth-first so each
// level-k pair expands once. Parallel across nodes; result is identical to
// the serial pass bit for bit.
std::vector<ChannelPair> synthesize_level(const ChannelPair& p, int n, const SynthesisBudget& budget,
                                          bool parallel = true);

}  // namespace mispolar
