#include "mispolar/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "mispolar/accum.hpp"
#include "mispolar/errors.hpp"
#include "mispolar/parallel.hpp"

namespace mispolar {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct Sampler {
    std::vector<double> cum0, cum1;

    explicit Sampler(const Bdmc& w) {
        double a0 = 0.0, a1 = 0.0;
        for (std::size_t y = 0; y < w.alphabet_size(); ++y) {
            a0 += w.w0(y);
            a1 += w.w1(y);
            cum0.push_back(a0);
            cum1.push_back(a1);
        }
    }

    std::uint32_t draw(std::uint8_t x, Rng& rng) const {
        const auto& cum = x ? cum1 : cum0;
        double r = rng.u01() * cum.back();
        auto it = std::upper_bound(cum.begin(), cum.end(), r);
        std::size_t y = static_cast<std::size_t>(it - cum.begin());
        if (y >= cum.size()) y = cum.size() - 1;
        return static_cast<std::uint32_t>(y);
    }
};

}  // namespace

void wilson_interval(std::int64_t successes, std::int64_t trials, double& lo, double& hi) {
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = kZ95 * kZ95;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    hi = successes == trials ? 1.0 : std::min(1.0, center + half);
}

SimReport simulate_block_error(const PolarCode& code, const Bdmc& w, const Bdmc& v,
                               std::int64_t trials, std::uint64_t seed, TiePolicy policy,
                               bool parallel) {
    if (trials < 1) throw OutOfRangeError("simulation needs trials >= 1");
    if (w.alphabet_size() != v.alphabet_size())
        throw SimulationMismatchError("true and metric channels need matching alphabets");
    long size = code.block_size();
    for (std::int32_t i : code.info_set)
        if (i < 1 || i > size) throw SimulationMismatchError("info set index outside blocklength");

    auto t0 = std::chrono::steady_clock::now();
    Sampler sampler(w);

    constexpr std::int64_t kChunk = 256;
    std::int64_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<std::int64_t> chunk_errors(static_cast<std::size_t>(chunks), 0);

    bool use_omp = parallel && parallel_enabled() && chunks > 1;
#pragma omp parallel if (use_omp) num_threads(worker_count())
    {
        ScDecoder dec(code.n);
        std::vector<std::uint8_t> message(code.info_set.size());
        std::vector<std::uint32_t> y(static_cast<std::size_t>(size));
#pragma omp for schedule(dynamic)
        for (std::int64_t c = 0; c < chunks; ++c) {
            std::int64_t errors = 0;
            std::int64_t lo = c * kChunk;
            std::int64_t hi = std::min(trials, lo + kChunk);
            for (std::int64_t t = lo; t < hi; ++t) {
                Rng rng(seed, static_cast<std::uint64_t>(t));
                for (auto& b : message) b = static_cast<std::uint8_t>(rng.bit());
                auto x = encode(code, message);
                for (long j = 0; j < size; ++j)
                    y[static_cast<std::size_t>(j)] = sampler.draw(x[static_cast<std::size_t>(j)], rng);
                auto result = dec.decode(code, v, y, policy, rng);
                if (result.message != message) ++errors;
            }
            chunk_errors[static_cast<std::size_t>(c)] = errors;
        }
    }

    SimReport report;
    report.trials = trials;
    for (std::int64_t e : chunk_errors) report.block_errors += e;
    report.p_hat = static_cast<double>(report.block_errors) / static_cast<double>(trials);
    wilson_interval(report.block_errors, trials, report.ci_lo, report.ci_hi);
    report.seed = seed;
    report.genie_bound = code.genie_bound;
    report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

struct PathRecord {
    // flattened per-depth samples, depth-major; NaN marks truncated depths
    std::vector<double> i, d, z, t, pe;
    int truncated_at = -1;  // first infeasible depth, -1 if none
};

PathRecord run_path(const ChannelPair& start, int depth, const SynthesisBudget& budget, Rng& rng) {
    PathRecord rec;
    rec.i.resize(depth);
    rec.d.resize(depth);
    rec.z.resize(depth);
    rec.t.resize(depth);
    rec.pe.resize(depth);
    ChannelPair cur = start;
    for (int lvl = 0; lvl < depth; ++lvl) {
        bool plus = rng.bit() != 0;
        if (rec.truncated_at < 0) {
            try {
                cur = plus ? plus_transform(cur, budget) : minus_transform(cur, budget);
            } catch (const BudgetExceededError&) {
                rec.truncated_at = lvl;
            }
        }
        if (rec.truncated_at >= 0) {
            rec.i[lvl] = rec.d[lvl] = rec.z[lvl] = rec.t[lvl] = rec.pe[lvl] =
                std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        rec.i[lvl] = mmi(cur);
        rec.d[lvl] = d_param(cur);
        rec.z[lvl] = z_mismatch(cur);
        rec.t[lvl] = t_param(cur, 1);
        rec.pe[lvl] = pe_ml(cur);
    }
    return rec;
}

double quantile(std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

PolarizationTrace sample_paths(const ChannelPair& p, int depth, std::int64_t paths,
                               std::uint64_t seed, double gamma, const SynthesisBudget& budget,
                               bool parallel) {
    if (depth < 1) throw OutOfRangeError("trace needs depth >= 1");
    if (paths < 1) throw OutOfRangeError("trace needs paths >= 1");
    if (!(gamma > 0.0 && gamma < 0.25)) throw OutOfRangeError("trace gamma must sit in (0, 0.25)");

    ChannelPair start = canonicalize(p, budget.merge_tol);
    std::vector<PathRecord> records(static_cast<std::size_t>(paths));
    bool use_omp = parallel && parallel_enabled() && paths > 1;
#pragma omp parallel for schedule(dynamic) if (use_omp) num_threads(worker_count())
    for (std::int64_t path = 0; path < paths; ++path) {
        Rng rng(seed, static_cast<std::uint64_t>(path));
        records[static_cast<std::size_t>(path)] = run_path(start, depth, budget, rng);
    }

    PolarizationTrace trace;
    trace.depth = depth;
    trace.paths = paths;
    trace.seed = seed;
    trace.gamma = gamma;
    for (const auto& rec : records)
        if (rec.truncated_at >= 0) ++trace.truncated_paths;

    for (int lvl = 0; lvl < depth; ++lvl) {
        TraceLevel out;
        out.depth = lvl + 1;
        std::vector<double> vi, vd, vz, vt, vpe;
        for (const auto& rec : records) {
            if (std::isnan(rec.d[lvl])) continue;
            vi.push_back(rec.i[lvl]);
            vd.push_back(rec.d[lvl]);
            vz.push_back(rec.z[lvl]);
            vt.push_back(rec.t[lvl]);
            vpe.push_back(rec.pe[lvl]);
        }
        out.alive = static_cast<std::int64_t>(vd.size());
        auto summarize = [](std::vector<double>& v, double& mean, double& q10, double& q50, double& q90) {
            bool neg_inf = false, pos_inf = false;
            Accum a;
            for (double x : v) {
                if (std::isinf(x))
                    (x < 0 ? neg_inf : pos_inf) = true;
                else
                    a.add(x);
            }
            if (v.empty())
                mean = std::numeric_limits<double>::quiet_NaN();
            else if (neg_inf && pos_inf)
                mean = std::numeric_limits<double>::quiet_NaN();
            else if (neg_inf || pos_inf)
                mean = neg_inf ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
            else
                mean = a.value() / static_cast<double>(v.size());
            std::sort(v.begin(), v.end());
            q10 = quantile(v, 0.10);
            q50 = quantile(v, 0.50);
            q90 = quantile(v, 0.90);
        };
        summarize(vi, out.mean_i, out.q10_i, out.q50_i, out.q90_i);
        summarize(vd, out.mean_d, out.q10_d, out.q50_d, out.q90_d);
        summarize(vz, out.mean_z, out.q10_z, out.q50_z, out.q90_z);
        summarize(vt, out.mean_t, out.q10_t, out.q50_t, out.q90_t);
        std::int64_t low = 0, mid = 0, high = 0;
        for (double pe : vpe) {
            if (pe <= gamma)
                ++low;
            else if (pe >= 0.5 - gamma)
                ++high;
            else
                ++mid;
        }
        double alive = out.alive > 0 ? static_cast<double>(out.alive) : 1.0;
        out.frac_pe_low = static_cast<double>(low) / alive;
        out.frac_mid = static_cast<double>(mid) / alive;
        out.frac_pe_high = static_cast<double>(high) / alive;
        trace.levels.push_back(out);
    }
    return trace;
}

}  // namespace mispolar
