#include "mispolar/construct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "mispolar/accum.hpp"
#include "mispolar/errors.hpp"
#include "mispolar/parallel.hpp"

namespace mispolar {

namespace {

nlohmann::json budget_json(const SynthesisBudget& b) {
    return {{"max_symbols", b.max_symbols}, {"merge_tol", b.merge_tol}};
}

PolarCode assemble(int n, std::vector<std::int32_t> info, SelectionRule rule, double genie_bound,
                   nlohmann::json provenance) {
    std::sort(info.begin(), info.end());
    PolarCode code;
    code.n = n;
    code.info_set = std::move(info);
    code.frozen_values.assign(static_cast<std::size_t>(1) << n, 0);
    code.rule = rule;
    code.genie_bound = genie_bound;
    code.provenance = std::move(provenance);
    return code;
}

struct LevelStats {
    std::vector<double> stat_i;   // matched I of the W part
    std::vector<double> stat_z;   // matched Z of the W part
    std::vector<double> stat_zp;  // Z(W,V)
    std::vector<double> stat_pe;  // Pe_ML(W,V)
};

LevelStats level_stats(const ChannelPair& p, int n, const SynthesisBudget& budget) {
    auto level = synthesize_level(p, n, budget);
    LevelStats s;
    s.stat_i.reserve(level.size());
    s.stat_z.reserve(level.size());
    s.stat_zp.reserve(level.size());
    s.stat_pe.reserve(level.size());
    for (const auto& node : level) {
        auto mp = w_params(node);
        s.stat_i.push_back(mp.I);
        s.stat_z.push_back(mp.Z);
        s.stat_zp.push_back(z_mismatch(node));
        s.stat_pe.push_back(pe_ml(node));
    }
    return s;
}

double sum_over(const std::vector<double>& values, const std::vector<std::int32_t>& indices) {
    Accum a;
    for (std::int32_t i : indices) a.add(values[static_cast<std::size_t>(i - 1)]);
    return a.value();
}

void check_k(long k, long size) {
    if (k < 0 || k > size) throw KTooLargeError("requested info set size exceeds blocklength");
}

}  // namespace

std::string rule_name(SelectionRule rule) {
    switch (rule) {
        case SelectionRule::MatchedI: return "MATCHED_I";
        case SelectionRule::MatchedZ: return "MATCHED_Z";
        default: return "MISMATCHED_PE";
    }
}

SelectionRule rule_from_name(const std::string& name) {
    if (name == "MATCHED_I") return SelectionRule::MatchedI;
    if (name == "MATCHED_Z") return SelectionRule::MatchedZ;
    if (name == "MISMATCHED_PE") return SelectionRule::MismatchedPe;
    throw SpecParseError("unknown selection rule: " + name);
}

PolarCode info_set_matched_threshold(const Bdmc& w, int n, double gamma, const SynthesisBudget& budget) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw OutOfRangeError("matched threshold needs gamma in (0,1)");
    auto stats = level_stats(make_pair(w, w), n, budget);
    std::vector<std::int32_t> info;
    for (std::size_t i = 0; i < stats.stat_i.size(); ++i)
        if (stats.stat_i[i] >= 1.0 - gamma) info.push_back(static_cast<std::int32_t>(i + 1));
    double bound = sum_over(stats.stat_pe, info);
    return assemble(n, std::move(info), SelectionRule::MatchedI, bound,
                    {{"selector", {{"gamma", gamma}}},
                     {"method", "exact"},
                     {"budget", budget_json(budget)}});
}

PolarCode info_set_matched_size(const Bdmc& w, int n, long k, const SynthesisBudget& budget) {
    check_k(k, 1L << n);
    auto stats = level_stats(make_pair(w, w), n, budget);
    std::vector<std::int32_t> order(stats.stat_z.size());
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        double za = stats.stat_z[static_cast<std::size_t>(a - 1)];
        double zb = stats.stat_z[static_cast<std::size_t>(b - 1)];
        if (za != zb) return za < zb;
        return a < b;
    });
    std::vector<std::int32_t> info(order.begin(), order.begin() + k);
    double bound = sum_over(stats.stat_pe, info);
    return assemble(n, std::move(info), SelectionRule::MatchedZ, bound,
                    {{"selector", {{"k", k}}}, {"method", "exact"}, {"budget", budget_json(budget)}});
}

PolarCode info_set_mismatched_threshold(const ChannelPair& p, int n, double gamma,
                                        const SynthesisBudget& budget) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw OutOfRangeError("mismatched threshold needs gamma in (0,1/2)");
    auto stats = level_stats(p, n, budget);
    std::vector<std::int32_t> info;
    for (std::size_t i = 0; i < stats.stat_pe.size(); ++i)
        if (stats.stat_pe[i] <= gamma) info.push_back(static_cast<std::int32_t>(i + 1));
    double bound = sum_over(stats.stat_pe, info);
    return assemble(n, std::move(info), SelectionRule::MismatchedPe, bound,
                    {{"selector", {{"gamma", gamma}}},
                     {"method", "exact"},
                     {"budget", budget_json(budget)}});
}

PolarCode info_set_mismatched_size(const ChannelPair& p, int n, long k, const SynthesisBudget& budget) {
    check_k(k, 1L << n);
    auto stats = level_stats(p, n, budget);
    std::vector<std::int32_t> order(stats.stat_pe.size());
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        double pa = stats.stat_pe[static_cast<std::size_t>(a - 1)];
        double pb = stats.stat_pe[static_cast<std::size_t>(b - 1)];
        if (pa != pb) return pa < pb;
        double za = stats.stat_zp[static_cast<std::size_t>(a - 1)];
        double zb = stats.stat_zp[static_cast<std::size_t>(b - 1)];
        if (za != zb) return za < zb;
        return a < b;
    });
    std::vector<std::int32_t> info(order.begin(), order.begin() + k);
    double bound = sum_over(stats.stat_pe, info);
    return assemble(n, std::move(info), SelectionRule::MismatchedPe, bound,
                    {{"selector", {{"k", k}}}, {"method", "exact"}, {"budget", budget_json(budget)}});
}

PolarCode construct_genie_mc(const Bdmc& w, const Bdmc& v, int n, long k, std::int64_t trials,
                             std::uint64_t seed) {
    check_k(k, 1L << n);
    auto estimate = genie_per_bit_error_mc(n, w, v, trials, seed);
    // Scalar surrogate for breaking estimate ties (many indices measure zero
    // errors): the BEC-style recursion on Z(W,V) with z+ = z^2 and the
    // Z- <= 2Z bound, capped at 1. Exact for erasure pairs, a ranking
    // heuristic elsewhere.
    std::size_t size = estimate.per_index.size();
    std::vector<double> surrogate{std::min(z_mismatch(make_pair(w, v)), 1.0)};
    for (int level = 0; level < n; ++level) {
        std::vector<double> next;
        next.reserve(surrogate.size() * 2);
        for (double z : surrogate) {
            next.push_back(std::min(1.0, 2.0 * z - z * z));
            next.push_back(z * z);
        }
        surrogate = std::move(next);
    }
    std::vector<std::int32_t> order(size);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        double pa = estimate.per_index[static_cast<std::size_t>(a - 1)];
        double pb = estimate.per_index[static_cast<std::size_t>(b - 1)];
        if (pa != pb) return pa < pb;
        double za = surrogate[static_cast<std::size_t>(a - 1)];
        double zb = surrogate[static_cast<std::size_t>(b - 1)];
        if (za != zb) return za < zb;
        return a < b;
    });
    std::vector<std::int32_t> info(order.begin(), order.begin() + k);
    Accum bound;
    for (std::int32_t i : info) bound.add(estimate.per_index[static_cast<std::size_t>(i - 1)]);
    return assemble(n, std::move(info), SelectionRule::MismatchedPe, bound.value(),
                    {{"selector", {{"k", k}}},
                     {"method", "genie_mc"},
                     {"trials", trials},
                     {"seed", seed}});
}

BoundLedger lower_bound_family(const ChannelPair& p, int max_n, const SynthesisBudget& budget,
                               bool parallel) {
    BoundLedger ledger;
    double i0 = mmi(p);
    if (std::isinf(i0)) {  // |. |^+ of -inf everywhere by convention
        for (int n = 0; n <= max_n; ++n) ledger.levels.push_back({n, 0.0});
        return ledger;
    }
    std::vector<ChannelPair> level{canonicalize(p, budget.merge_tol)};
    for (int n = 0;; ++n) {
        Accum sum;
        for (const auto& node : level) sum.add(std::max(mmi(node), 0.0));
        ledger.levels.push_back({n, sum.value() / static_cast<double>(level.size())});
        if (n == max_n) break;

        std::vector<ChannelPair> next(level.size() * 2);
        std::atomic<bool> failed{false};
        bool use_omp = parallel && worker_count() > 1 && level.size() > 1;
        long nodes = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic, 1) if (use_omp) num_threads(worker_count())
        for (long i = 0; i < nodes; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                next[2 * i] = minus_transform(level[i], budget);
                next[2 * i + 1] = plus_transform(level[i], budget);
            } catch (const BudgetExceededError&) {
                failed.store(true, std::memory_order_relaxed);
            }
        }
        if (failed.load()) {
            ledger.truncated = true;
            break;
        }
        level = std::move(next);
    }
    return ledger;
}

}  // namespace mispolar
