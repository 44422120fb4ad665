#include "mispolar/codec.hpp"

#include <algorithm>
#include <cmath>

#include "mispolar/accum.hpp"
#include "mispolar/errors.hpp"
#include "mispolar/parallel.hpp"

namespace mispolar {

namespace {

double tidy(double delta) { return std::isnan(delta) ? 0.0 : delta; }

double combine_minus(double a, double b) { return tidy(a) * tidy(b); }

double combine_plus(double a, double b, std::uint8_t known_bit) {
    double s = known_bit ? -1.0 : 1.0;
    double aa = tidy(a), bb = tidy(b);
    double r = (s * aa + bb) / (1.0 + s * aa * bb);
    if (std::isnan(r)) return 0.0;  // contradictory perfect evidence: tie
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace

std::uint32_t bit_reverse(std::uint32_t x, int bits) {
    std::uint32_t out = 0;
    for (int b = 0; b < bits; ++b) {
        out = (out << 1) | (x & 1);
        x >>= 1;
    }
    return out;
}

std::vector<std::uint8_t> PolarCode::info_mask() const {
    std::vector<std::uint8_t> mask(block_size(), 0);
    for (std::int32_t i : info_set) mask[static_cast<std::size_t>(i - 1)] = 1;
    return mask;
}

std::vector<std::uint8_t> encode(const PolarCode& code, const std::vector<std::uint8_t>& message) {
    std::size_t size = static_cast<std::size_t>(code.block_size());
    if (message.size() != code.info_set.size())
        throw LengthMismatchError("message length != info set size");
    std::vector<std::uint8_t> u(size, 0);
    if (code.frozen_values.size() == size) u = code.frozen_values;
    for (std::size_t k = 0; k < code.info_set.size(); ++k)
        u[static_cast<std::size_t>(code.info_set[k] - 1)] = message[k];

    // x = (u B_N) F^(x)n: bit-reversal permute, then in-place butterflies
    std::vector<std::uint8_t> x(size);
    for (std::size_t j = 0; j < size; ++j)
        x[j] = u[bit_reverse(static_cast<std::uint32_t>(j), code.n)];
    for (std::size_t half = 1; half < size; half <<= 1)
        for (std::size_t block = 0; block < size; block += 2 * half)
            for (std::size_t j = block; j < block + half; ++j)
                x[j] ^= x[j + half];
    return x;
}

ScDecoder::ScDecoder(int n) : n_levels_(n), n_size_(1 << n) {
    scratch_.resize(n + 1);
    for (int d = 0; d <= n; ++d) scratch_[d].resize(std::size_t{1} << (n - d));
    partial_.resize(n_size_);
    u_hat_.resize(n_size_);
}

// One subtree: `leaf` holds this segment's beliefs, `offset` its first
// channel index (0-based), `depth` its level in the tree. Decisions fill
// u_hat_; partial_ carries the re-encoded segment back up.
void ScDecoder::run(const double* leaf, int len, int offset, int depth) {
    if (len == 1) {
        double belief = leaf[0];
        std::uint8_t bit = 0;
        if (u_true_) {
            bit = (*u_true_)[static_cast<std::size_t>(offset)];
            (*beliefs_)[static_cast<std::size_t>(offset)] = belief;
        } else {
            bool frozen = !info_mask_[static_cast<std::size_t>(offset)];
            bool tie = false;
            if (frozen) {
                bit = frozen_[static_cast<std::size_t>(offset)];
            } else if (belief > 0.0) {
                bit = 0;
            } else if (belief < 0.0) {
                bit = 1;
            } else {
                tie = true;
                bit = policy_ == TiePolicy::FairCoin ? static_cast<std::uint8_t>(rng_->bit()) : 0;
            }
            if (trace_) trace_->push_back({offset + 1, belief, bit, frozen, tie});
        }
        u_hat_[static_cast<std::size_t>(offset)] = bit;
        partial_[static_cast<std::size_t>(offset)] = bit;
        return;
    }
    int half = len / 2;
    double* child = scratch_[static_cast<std::size_t>(depth + 1)].data();
    for (int j = 0; j < half; ++j) child[j] = combine_minus(leaf[j], leaf[j + half]);
    run(child, half, offset, depth + 1);
    for (int j = 0; j < half; ++j)
        child[j] = combine_plus(leaf[j], leaf[j + half], partial_[static_cast<std::size_t>(offset + j)]);
    run(child, half, offset + half, depth + 1);
    for (int j = 0; j < half; ++j)
        partial_[static_cast<std::size_t>(offset + j)] ^=
            partial_[static_cast<std::size_t>(offset + half + j)];
}

void ScDecoder::load_leaves(const Bdmc& metric, const std::vector<std::uint32_t>& received) {
    if (received.size() != static_cast<std::size_t>(n_size_))
        throw LengthMismatchError("received word length != 2^n");
    double* leaves = scratch_[0].data();
    for (int j = 0; j < n_size_; ++j) {
        std::uint32_t y = received[bit_reverse(static_cast<std::uint32_t>(j), n_levels_)];
        if (y >= metric.alphabet_size())
            throw AlphabetMismatchError("received symbol outside metric alphabet");
        leaves[j] = metric.symbols()[y].delta;
    }
}

DecodeResult ScDecoder::decode(const PolarCode& code, const Bdmc& metric,
                               const std::vector<std::uint32_t>& received, TiePolicy policy,
                               Rng& rng) {
    if (code.block_size() != n_size_) throw LengthMismatchError("code blocklength != decoder size");
    load_leaves(metric, received);
    info_mask_ = code.info_mask();
    frozen_ = code.frozen_values;
    if (frozen_.size() != static_cast<std::size_t>(n_size_)) frozen_.assign(n_size_, 0);
    policy_ = policy;
    rng_ = &rng;
    u_true_ = nullptr;
    beliefs_ = nullptr;
    DecodeResult result;
    result.trace.reserve(n_size_);
    trace_ = &result.trace;
    run(scratch_[0].data(), n_size_, 0, 0);
    trace_ = nullptr;
    rng_ = nullptr;
    result.u = u_hat_;
    result.message.reserve(code.info_set.size());
    for (std::int32_t i : code.info_set) result.message.push_back(u_hat_[static_cast<std::size_t>(i - 1)]);
    return result;
}

void ScDecoder::genie_beliefs(const Bdmc& metric, const std::vector<std::uint32_t>& received,
                              const std::vector<std::uint8_t>& u_true, std::vector<double>& beliefs_out) {
    if (u_true.size() != static_cast<std::size_t>(n_size_))
        throw LengthMismatchError("input word length != 2^n");
    load_leaves(metric, received);
    beliefs_out.resize(n_size_);
    u_true_ = &u_true;
    beliefs_ = &beliefs_out;
    run(scratch_[0].data(), n_size_, 0, 0);
    u_true_ = nullptr;
    beliefs_ = nullptr;
}

namespace {

double genie_error_credit(double belief, std::uint8_t true_bit) {
    if (belief > 0.0) return true_bit == 1 ? 1.0 : 0.0;
    if (belief < 0.0) return true_bit == 0 ? 1.0 : 0.0;
    return 0.5;
}

void check_shared_alphabet(const Bdmc& w, const Bdmc& v) {
    if (w.alphabet_size() != v.alphabet_size())
        throw AlphabetMismatchError("true and metric channels need matching alphabets");
}

}  // namespace

GenieEstimate genie_per_bit_error_exact(int n, const Bdmc& w, const Bdmc& v) {
    check_shared_alphabet(w, v);
    if (n < 1 || n > 16) throw ExactInfeasibleError("exact genie limited to 1 <= n <= 16");
    int size = 1 << n;
    std::size_t k = w.alphabet_size();
    double combos = std::pow(static_cast<double>(k), size) * std::pow(2.0, size);
    if (combos > 6e7) throw ExactInfeasibleError("exact genie enumeration too large");
    std::int64_t y_count = 1;
    for (int j = 0; j < size; ++j) y_count *= static_cast<std::int64_t>(k);

    PolarCode all_info;
    all_info.n = n;
    for (int i = 1; i <= size; ++i) all_info.info_set.push_back(i);

    std::vector<Accum> err(static_cast<std::size_t>(size));
    ScDecoder dec(n);
    std::vector<std::uint32_t> y(static_cast<std::size_t>(size));
    std::vector<std::uint8_t> u(static_cast<std::size_t>(size));
    std::vector<double> beliefs;
    for (std::int64_t yi = 0; yi < y_count; ++yi) {
        std::int64_t rest = yi;
        for (int j = 0; j < size; ++j) {
            y[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(rest % static_cast<std::int64_t>(k));
            rest /= static_cast<std::int64_t>(k);
        }
        for (std::int64_t ui = 0; ui < (std::int64_t{1} << size); ++ui) {
            for (int j = 0; j < size; ++j) u[static_cast<std::size_t>(j)] = (ui >> j) & 1;
            auto x = encode(all_info, u);
            double weight = 1.0;
            for (int j = 0; j < size; ++j) {
                std::size_t yy = y[static_cast<std::size_t>(j)];
                weight *= x[static_cast<std::size_t>(j)] ? w.w1(yy) : w.w0(yy);
                if (weight == 0.0) break;
            }
            if (weight == 0.0) continue;
            dec.genie_beliefs(v, y, u, beliefs);
            for (int i = 0; i < size; ++i)
                err[static_cast<std::size_t>(i)].add(
                    weight * genie_error_credit(beliefs[static_cast<std::size_t>(i)],
                                                u[static_cast<std::size_t>(i)]));
        }
    }
    GenieEstimate out;
    out.exact = true;
    out.trials = 0;
    double scale = std::pow(2.0, -size);
    for (auto& a : err) out.per_index.push_back(a.value() * scale);
    return out;
}

GenieEstimate genie_per_bit_error_mc(int n, const Bdmc& w, const Bdmc& v, std::int64_t trials,
                                     std::uint64_t seed) {
    check_shared_alphabet(w, v);
    if (trials < 1) throw OutOfRangeError("genie Monte Carlo needs trials >= 1");
    int size = 1 << n;
    std::size_t k = w.alphabet_size();

    // per-input sampling CDFs
    std::vector<double> cum0(k), cum1(k);
    double a0 = 0.0, a1 = 0.0;
    for (std::size_t yy = 0; yy < k; ++yy) {
        a0 += w.w0(yy);
        a1 += w.w1(yy);
        cum0[yy] = a0;
        cum1[yy] = a1;
    }

    PolarCode all_info;
    all_info.n = n;
    for (int i = 1; i <= size; ++i) all_info.info_set.push_back(i);

    constexpr std::int64_t kChunk = 1024;
    std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    // 2x error credit per index per chunk keeps the reduction integral,
    // hence identical for any thread schedule
    std::vector<std::vector<std::int64_t>> chunk_credit(static_cast<std::size_t>(chunks));

    bool use_omp = parallel_enabled() && chunks > 1;
#pragma omp parallel if (use_omp) num_threads(worker_count())
    {
        ScDecoder dec(n);
        std::vector<std::uint32_t> y(static_cast<std::size_t>(size));
        std::vector<std::uint8_t> u(static_cast<std::size_t>(size));
        std::vector<double> beliefs;
#pragma omp for schedule(dynamic)
        for (std::int64_t c = 0; c < chunks; ++c) {
            std::vector<std::int64_t> credit(static_cast<std::size_t>(size), 0);
            std::int64_t lo = c * kChunk;
            std::int64_t hi = std::min(trials, lo + kChunk);
            for (std::int64_t t = lo; t < hi; ++t) {
                Rng rng(seed, static_cast<std::uint64_t>(t));
                for (int j = 0; j < size; ++j) u[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(rng.bit());
                auto x = encode(all_info, u);
                for (int j = 0; j < size; ++j) {
                    const auto& cum = x[static_cast<std::size_t>(j)] ? cum1 : cum0;
                    double r = rng.u01() * cum.back();
                    y[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(
                        std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
                    if (y[static_cast<std::size_t>(j)] >= k) y[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(k - 1);
                }
                dec.genie_beliefs(v, y, u, beliefs);
                for (int i = 0; i < size; ++i) {
                    double e = genie_error_credit(beliefs[static_cast<std::size_t>(i)],
                                                  u[static_cast<std::size_t>(i)]);
                    credit[static_cast<std::size_t>(i)] += static_cast<std::int64_t>(2.0 * e);
                }
            }
            chunk_credit[static_cast<std::size_t>(c)] = std::move(credit);
        }
    }
    GenieEstimate out;
    out.exact = false;
    out.trials = trials;
    out.per_index.assign(static_cast<std::size_t>(size), 0.0);
    for (const auto& credit : chunk_credit)
        for (int i = 0; i < size; ++i)
            out.per_index[static_cast<std::size_t>(i)] += static_cast<double>(credit[static_cast<std::size_t>(i)]);
    for (auto& e : out.per_index) e /= 2.0 * static_cast<double>(trials);
    return out;
}

GenieEstimate genie_per_bit_error(int n, const Bdmc& w, const Bdmc& v, std::int64_t trials,
                                  std::uint64_t seed) {
    try {
        return genie_per_bit_error_exact(n, w, v);
    } catch (const ExactInfeasibleError&) {
        return genie_per_bit_error_mc(n, w, v, trials, seed);
    }
}

}  // namespace mispolar
