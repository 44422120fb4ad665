#include "mispolar/polarize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "mispolar/detail/merge.hpp"
#include "mispolar/errors.hpp"
#include "mispolar/parallel.hpp"

namespace mispolar {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Open-addressed accumulation table keyed by merge bucket. Streaming the
// K^2-sized raw products through it keeps memory at the merged size and lets
// the budget trip before anything blows up.
class MergeTable {
  public:
    MergeTable(std::size_t expected, std::size_t limit) : limit_(limit) {
        std::size_t cap = 64;
        while (cap < expected * 2) cap <<= 1;
        slots_.resize(cap);
    }

    void add(double q, double dw, double dv, double tol) {
        auto key = detail::make_key(dw, dv, tol);
        std::uint64_t h = detail::hash_key(key);
        std::size_t mask = slots_.size() - 1;
        std::size_t at = h & mask;
        while (true) {
            Slot& s = slots_[at];
            if (s.hash == 0) {
                if (count_ + 1 > limit_)
                    throw BudgetExceededError("synthesized alphabet exceeds max_symbols");
                s.hash = h;
                s.key = key;
                s.q = q;
                s.qc = 0.0;
                s.qdw = q * dw;
                s.qdv = key.cv == detail::ValClass::Undef ? 0.0 : q * dv;
                ++count_;
                if (count_ * 10 > slots_.size() * 7) grow();
                return;
            }
            if (s.hash == h && s.key == key) {
                // compensated: a node sums up to K^2 masses and the total must
                // stay stochastic to ~1e-12
                double t = s.q + q;
                s.qc += s.q >= q ? (s.q - t) + q : (q - t) + s.q;
                s.q = t;
                s.qdw += q * dw;
                if (key.cv != detail::ValClass::Undef) s.qdv += q * dv;
                return;
            }
            at = (at + 1) & mask;
        }
    }

    std::vector<PairSymbol> extract() const {
        std::vector<PairSymbol> out;
        out.reserve(count_);
        for (const auto& s : slots_) {
            double q = s.q + s.qc;
            if (s.hash == 0 || q <= 0.0) continue;
            out.push_back({q, mean_of(s.key.cw, s.qdw, q), mean_of(s.key.cv, s.qdv, q)});
        }
        return out;
    }

  private:
    struct Slot {
        std::uint64_t hash = 0;
        detail::SymbolKey key{};
        double q = 0.0;
        double qc = 0.0;  // Neumaier compensation for q
        double qdw = 0.0;
        double qdv = 0.0;
    };

    static double mean_of(detail::ValClass cls, double weighted, double q) {
        switch (cls) {
            case detail::ValClass::Zero: return 0.0;
            case detail::ValClass::PosOne: return 1.0;
            case detail::ValClass::NegOne: return -1.0;
            case detail::ValClass::Undef: return kNan;
            default: {
                double m = std::clamp(weighted / q, -1.0, 1.0);
                // an interior group's mean must stay interior
                if (std::abs(m) == 1.0) m = std::copysign(0x1.fffffffffffffp-1, m);
                return m;
            }
        }
    }

    void grow() {
        std::vector<Slot> old;
        old.swap(slots_);
        slots_.resize(old.size() * 2);
        std::size_t mask = slots_.size() - 1;
        for (const auto& s : old) {
            if (s.hash == 0) continue;
            std::size_t at = s.hash & mask;
            while (slots_[at].hash != 0) at = (at + 1) & mask;
            slots_[at] = s;
        }
    }

    std::vector<Slot> slots_;
    std::size_t count_ = 0;
    std::size_t limit_;
};

void check_budget(const SynthesisBudget& b) {
    if (b.max_symbols < 2) throw OutOfRangeError("budget needs max_symbols >= 2");
    if (!(b.merge_tol >= 0.0)) throw OutOfRangeError("budget needs merge_tol >= 0");
}

double combine_plus(double a, double b, double s) {
    double num = s * a + b;
    double den = 1.0 + s * a * b;
    double r = num / den;  // 0/0 -> NaN, exactly the undefined-metric case
    if (std::isnan(r)) return r;
    r = std::clamp(r, -1.0, 1.0);
    // Exact +/-1 marks a zero transition probability; rounding must not
    // manufacture one from interior operands, so saturate one ulp inside.
    if (std::abs(r) == 1.0 && std::abs(a) != 1.0 && std::abs(b) != 1.0)
        r = std::copysign(0x1.fffffffffffffp-1, r);
    return r;
}

}  // namespace

long index_of(const SignSequence& signs) {
    long i = 1;
    for (Sign s : signs) i = 2 * i - 1 + (s == Sign::Plus ? 1 : 0);
    return i;
}

SignSequence signs_of(long index, int n) {
    if (n < 0 || n > 62) throw IndexOutOfRangeError("level out of range");
    long count = 1L << n;
    if (index < 1 || index > count) throw IndexOutOfRangeError("channel index out of range");
    SignSequence signs(n);
    long bits = index - 1;
    for (int j = 0; j < n; ++j)
        signs[j] = ((bits >> (n - 1 - j)) & 1) ? Sign::Plus : Sign::Minus;
    return signs;
}

std::string signs_to_string(const SignSequence& signs) {
    std::string out;
    out.reserve(signs.size());
    for (Sign s : signs) out.push_back(s == Sign::Plus ? '+' : '-');
    return out;
}

ChannelPair minus_transform(const ChannelPair& p, const SynthesisBudget& budget) {
    check_budget(budget);
    const auto& sy = p.symbols();
    std::size_t k = sy.size();
    MergeTable table(k, budget.max_symbols);
    for (std::size_t i = 0; i < k; ++i) {
        if (sy[i].q == 0.0) continue;
        table.add(sy[i].q * sy[i].q, sy[i].dw * sy[i].dw, sy[i].dv * sy[i].dv, budget.merge_tol);
        for (std::size_t j = i + 1; j < k; ++j) {
            if (sy[j].q == 0.0) continue;
            table.add(2.0 * sy[i].q * sy[j].q, sy[i].dw * sy[j].dw, sy[i].dv * sy[j].dv,
                      budget.merge_tol);
        }
    }
    return canonicalize(ChannelPair::from_symbols(table.extract()), budget.merge_tol);
}

ChannelPair plus_transform(const ChannelPair& p, const SynthesisBudget& budget) {
    check_budget(budget);
    const auto& sy = p.symbols();
    std::size_t k = sy.size();
    MergeTable table(2 * k, budget.max_symbols);
    // u1 = 0: symmetric in (y1, y2)
    for (std::size_t i = 0; i < k; ++i) {
        if (sy[i].q == 0.0) continue;
        for (std::size_t j = i; j < k; ++j) {
            if (sy[j].q == 0.0) continue;
            double base = sy[i].q * sy[j].q * (i == j ? 1.0 : 2.0);
            double q = 0.5 * base * (1.0 + sy[i].dw * sy[j].dw);
            if (q <= 0.0) continue;
            table.add(q, combine_plus(sy[i].dw, sy[j].dw, 1.0),
                      combine_plus(sy[i].dv, sy[j].dv, 1.0), budget.merge_tol);
        }
    }
    // u1 = 1: order matters, (s dw1 + dw2) flips sign when swapped
    for (std::size_t i = 0; i < k; ++i) {
        if (sy[i].q == 0.0) continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (sy[j].q == 0.0) continue;
            double q = 0.5 * sy[i].q * sy[j].q * (1.0 - sy[i].dw * sy[j].dw);
            if (q <= 0.0) continue;
            table.add(q, combine_plus(sy[i].dw, sy[j].dw, -1.0),
                      combine_plus(sy[i].dv, sy[j].dv, -1.0), budget.merge_tol);
        }
    }
    return canonicalize(ChannelPair::from_symbols(table.extract()), budget.merge_tol);
}

ChannelPair synthesize(const ChannelPair& p, const SignSequence& signs, const SynthesisBudget& budget) {
    check_budget(budget);
    ChannelPair cur = canonicalize(p, budget.merge_tol);
    int depth = 0;
    for (Sign s : signs) {
        ++depth;
        try {
            cur = s == Sign::Minus ? minus_transform(cur, budget) : plus_transform(cur, budget);
        } catch (BudgetExceededError& e) {
            e.depth = depth;
            throw;
        }
    }
    return cur;
}

std::vector<ChannelPair> synthesize_level(const ChannelPair& p, int n, const SynthesisBudget& budget,
                                          bool parallel) {
    check_budget(budget);
    if (n < 0 || n > 30) throw IndexOutOfRangeError("level out of range");
    std::vector<ChannelPair> level{canonicalize(p, budget.merge_tol)};
    for (int depth = 1; depth <= n; ++depth) {
        std::vector<ChannelPair> next(level.size() * 2);
        std::atomic<bool> failed{false};
        bool use_omp = parallel && worker_count() > 1 && level.size() > 1;
        long node_count = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic, 1) if (use_omp) num_threads(worker_count())
        for (long node = 0; node < node_count; ++node) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                next[2 * node] = minus_transform(level[node], budget);
                next[2 * node + 1] = plus_transform(level[node], budget);
            } catch (const BudgetExceededError&) {
                failed.store(true, std::memory_order_relaxed);
            }
        }
        if (failed.load()) throw BudgetExceededError("synthesized alphabet exceeds max_symbols", depth);
        level = std::move(next);
    }
    return level;
}

}  // namespace mispolar
