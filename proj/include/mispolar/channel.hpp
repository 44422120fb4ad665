// Binary-input DMCs in canonical (q, delta) form:
//   q(y)     = (W(y|0) + W(y|1)) / 2        output law under uniform input
//   delta(y) = (W(y|0) - W(y|1)) / (W(y|0) + W(y|1))
// so W(y|0) = q(1+delta) and W(y|1) = q(1-delta). Values are immutable after
// construction and safe to share across threads.

#pragma once

#include <string>
#include <vector>

namespace mispolar {

struct OutputSymbol {
    double q;      // uniform-input mass, >= 0, sums to 1 over the alphabet
    double delta;  // in [-1, 1]; 0 when q == 0
};

class Bdmc {
  public:
    // Two rows of transition probabilities, index-aligned columns.
    static Bdmc from_rows(const std::vector<double>& row0, const std::vector<double>& row1);

    static Bdmc from_symbols(std::vector<OutputSymbol> symbols);

    const std::vector<OutputSymbol>& symbols() const { return symbols_; }
    std::size_t alphabet_size() const { return symbols_.size(); }

    double w0(std::size_t y) const { return symbols_[y].q * (1.0 + symbols_[y].delta); }
    double w1(std::size_t y) const { return symbols_[y].q * (1.0 - symbols_[y].delta); }

  private:
    Bdmc() = default;
    std::vector<OutputSymbol> symbols_;
};

// Parse "bsc:p", "bec:e" or "file:<path>" (JSON {"w": [[...],[...]]}).
// Throws OutOfRangeError, NonStochasticError, EmptyAlphabetError, SpecParseError.
Bdmc make_channel(const std::string& spec);

struct MatchedParams {
    double I;  // symmetric capacity, bits
    double Z;  // Bhattacharyya parameter
    double T;  // variational distance
    double D;  // E[sqrt(|delta|)]
};

MatchedParams matched_params(const Bdmc& w);

// T_k(W) = sum_y q(y) |delta(y)|^k, k >= 1.
double matched_t_k(const Bdmc& w, int k);

// Merge symbols whose deltas fall in the same tol-wide bucket (weighted-mean
// delta), drop zero-mass symbols, sort by delta ascending (ties: q descending).
// Exact 0 and +/-1 deltas keep their own buckets so support structure survives.
Bdmc canonicalize(const Bdmc& w, double tol);

}  // namespace mispolar
