// (true, metric) channel pairs over a shared output alphabet and the
// mismatched parameters computed from them. Per symbol we keep
//   q   mass of y under the true channel W with uniform input
//   dw  delta of W at y
//   dv  delta of the metric V at y; NaN when V puts no mass on y at all
// The metric's own output law never enters any parameter, so (q, dw, dv)
// is a complete description. Pairs are immutable; every operation is pure.

#pragma once

#include <vector>

#include "mispolar/channel.hpp"

namespace mispolar {

struct PairSymbol {
    double q;
    double dw;
    double dv;  // NaN = V(y|0) = V(y|1) = 0 while q > 0; decoder ties there
};

class ChannelPair {
  public:
    ChannelPair() = default;  // empty placeholder, filled by assignment

    static ChannelPair from_symbols(std::vector<PairSymbol> symbols);

    const std::vector<PairSymbol>& symbols() const { return symbols_; }
    std::size_t alphabet_size() const { return symbols_.size(); }

    // True iff some output with positive true mass gets zero metric
    // probability on an input the true channel can produce there. Exactly the
    // I = -inf condition; Z = +inf under the same condition.
    bool v_has_null_support() const { return v_null_; }

  private:
    std::vector<PairSymbol> symbols_;
    bool v_null_ = false;
};

// Zip two channels declared over the same alphabet (index-aligned symbols).
// Throws AlphabetMismatchError when widths differ.
ChannelPair make_pair(const Bdmc& w, const Bdmc& v);

// I(W,V) in bits; -inf iff v_has_null_support.
double mmi(const ChannelPair& p);

// D(W,V) = E[sqrt(|dv|)] under q, in [0,1].
double d_param(const ChannelPair& p);

// T_k(W,V) = E[|dv|^k]; k = 1 is the mismatched variational distance.
double t_param(const ChannelPair& p, int k = 1);

// Z(W,V) >= 0; +inf iff v_has_null_support.
double z_mismatch(const ChannelPair& p);

// Single-use mismatched ML error with fair-coin ties, in [0,1].
double pe_ml(const ChannelPair& p);

struct PairParams {
    double I;
    double D;
    double T;
    double Z;
    double Pe;
};

PairParams pair_params(const ChannelPair& p);

// Matched parameters of the true channel embedded in a pair.
MatchedParams w_params(const ChannelPair& p);

// Canonicalize a pair: bucket-merge on (dw, dv) with weighted means, drop
// zero-mass symbols, sort by (dw, dv) ascending with undefined dv last.
ChannelPair canonicalize(const ChannelPair& p, double tol);

}  // namespace mispolar
