// Polar encoding with G_N = B_N F^(x)n and successive cancellation decoding
// driven by a metric channel V that need not equal the true channel.
//
// All belief arithmetic runs in the delta = (1-L)/(1+L) domain: the minus
// combine is a plain product, the plus combine is the rational recursion, and
// everything stays inside [-1,1] with no overflow. A decoder instance holds
// scratch buffers and is single-use per call; distinct instances may run
// concurrently over a shared metric.

#pragma once

#include <cstdint>
#include <vector>

#include "mispolar/channel.hpp"
#include "mispolar/construct_types.hpp"
#include "mispolar/rng.hpp"

namespace mispolar {

// x = u B_N F^(x)n over F2; message bits fill code.info_set in index order,
// frozen positions take their pinned values.
std::vector<std::uint8_t> encode(const PolarCode& code, const std::vector<std::uint8_t>& message);

enum class TiePolicy : std::uint8_t { FairCoin, DeterministicZero };

struct BitDecision {
    std::int32_t index;  // 1-based channel index
    double belief;       // delta-domain belief, >0 favors 0
    std::uint8_t bit;
    bool frozen;
    bool tie;
};

struct DecodeResult {
    std::vector<std::uint8_t> message;  // info positions in index order
    std::vector<std::uint8_t> u;        // all N decisions
    std::vector<BitDecision> trace;
};

class ScDecoder {
  public:
    explicit ScDecoder(int n);

    // received: symbol indices into the shared output alphabet.
    DecodeResult decode(const PolarCode& code, const Bdmc& metric,
                        const std::vector<std::uint32_t>& received, TiePolicy policy, Rng& rng);

    // Per-index deltas of the genie-aided decoder: every stage is fed the
    // true previous inputs. Beliefs land in natural channel-index order.
    void genie_beliefs(const Bdmc& metric, const std::vector<std::uint32_t>& received,
                       const std::vector<std::uint8_t>& u_true, std::vector<double>& beliefs_out);

    int block_size() const { return n_size_; }

  private:
    void load_leaves(const Bdmc& metric, const std::vector<std::uint32_t>& received);
    void run(const double* leaf, int len, int offset, int depth);

    int n_levels_;
    int n_size_;
    std::vector<std::vector<double>> scratch_;  // one belief buffer per tree depth
    std::vector<std::uint8_t> partial_;         // re-encoded decisions per segment
    std::vector<std::uint8_t> u_hat_;

    // per-call state
    std::vector<std::uint8_t> info_mask_;
    std::vector<std::uint8_t> frozen_;
    const std::vector<std::uint8_t>* u_true_ = nullptr;
    std::vector<double>* beliefs_ = nullptr;
    std::vector<BitDecision>* trace_ = nullptr;
    TiePolicy policy_ = TiePolicy::DeterministicZero;
    Rng* rng_ = nullptr;
};

struct GenieEstimate {
    std::vector<double> per_index;  // estimated P_e,ML(W_N^(i), V_N^(i)), 1-based order
    bool exact;
    std::int64_t trials;  // 0 in exact mode
};

// Exact mode enumerates every (input vector, output vector) pair; infeasible
// sizes throw ExactInfeasibleError. Monte Carlo mode averages genie trials
// with half-credit ties; deterministic for a fixed seed.
GenieEstimate genie_per_bit_error_exact(int n, const Bdmc& w, const Bdmc& v);
GenieEstimate genie_per_bit_error_mc(int n, const Bdmc& w, const Bdmc& v, std::int64_t trials,
                                     std::uint64_t seed);

// Exact when feasible, otherwise Monte Carlo with `trials`.
GenieEstimate genie_per_bit_error(int n, const Bdmc& w, const Bdmc& v, std::int64_t trials,
                                  std::uint64_t seed);

std::uint32_t bit_reverse(std::uint32_t x, int bits);

}  // namespace mispolar
