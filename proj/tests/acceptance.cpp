// Acceptance suite: one pass/fail line per criterion. Exit code counts the
// failing criteria. Criterion 9 shells out to the CLI named by MISPOLAR_CLI.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mispolar/accum.hpp"
#include "mispolar/channel.hpp"
#include "mispolar/construct.hpp"
#include "mispolar/io.hpp"
#include "mispolar/mismatch.hpp"
#include "mispolar/montecarlo.hpp"
#include "mispolar/polarize.hpp"
#include "oracle.hpp"

using namespace mispolar;

namespace {

int g_failures = 0;

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void report(int id, const char* label, bool pass, double seconds, const std::string& detail = "") {
    std::printf("criterion %d: %s - %s (%.1fs)%s%s\n", id, pass ? "PASS" : "FAIL", label, seconds,
                detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ChannelPair lift(const oracle::MatrixPair& m) {
    return make_pair(Bdmc::from_rows(m.w0, m.w1), Bdmc::from_rows(m.v0, m.v1));
}

oracle::MatrixPair corpus_pair(Rng& rng, int trial) {
    auto m = oracle::random_pair(rng, 6);
    if (trial % 3 == 0) {  // plant exact metric ties so the tie-mass law is live
        oracle::plant_tie(m, 0);
        if (m.size() > 2 && trial % 6 == 0) oracle::plant_tie(m, 1);
    }
    return m;
}

double tie_mass(const ChannelPair& p) {
    double mass = 0.0;
    for (const auto& s : p.symbols())
        if (s.dv == 0.0) mass += s.q;
    return mass;
}

// ---------------------------------------------------------------- criterion 1
void criterion_transform_identities() {
    double t0 = now();
    constexpr double kTol = 1e-12;
    Rng rng(20260808, 0);
    bool pass = true;
    double worst = 0.0, plus_tie_gap = 0.0;
    SynthesisBudget budget;
    for (int trial = 0; trial < 1000 && pass; ++trial) {
        auto p = lift(corpus_pair(rng, trial));
        auto mn = minus_transform(p, budget);
        auto pl = plus_transform(p, budget);
        double d = d_param(p), t = t_param(p, 1), z = z_mismatch(p), i = mmi(p);
        double checks[] = {std::abs(d_param(mn) - d * d), std::abs(t_param(mn, 1) - t * t),
                           std::abs(z_mismatch(pl) - z * z), std::abs(mmi(mn) + mmi(pl) - 2 * i)};
        for (double c : checks) worst = std::max(worst, c);
        pass = pass && worst <= kTol;
        pass = pass && d_param(pl) <= 2 * d - d * d + kTol;
        pass = pass && z_mismatch(mn) <= 2 * z + kTol;
        double m0 = tie_mass(p);
        pass = pass && std::abs(tie_mass(mn) - (2 * m0 - m0 * m0)) <= kTol;
        double plus_mass = tie_mass(pl);
        pass = pass && plus_mass >= m0 * m0 - kTol;
        plus_tie_gap = std::max(plus_tie_gap, plus_mass - m0 * m0);
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail), "[max identity error %.2e, max plus tie-mass excess %.2e]",
                  worst, plus_tie_gap);
    report(1, "one-step transform identities, 1000 random pairs", pass, now() - t0, detail);
}

// ---------------------------------------------------------------- criterion 2
void criterion_parameter_inequalities() {
    double t0 = now();
    constexpr double kTol = 1e-12;
    Rng rng(20260808, 0);
    bool pass = true;
    for (int trial = 0; trial < 1000 && pass; ++trial) {
        auto p = lift(corpus_pair(rng, trial));
        double i_wv = mmi(p), i_w = w_params(p).I;
        double d = d_param(p), t = t_param(p, 1), z = z_mismatch(p), pe = pe_ml(p);
        pass = pass && i_wv <= i_w + kTol;
        pass = pass && i_wv <= d / std::log(2.0) + kTol;
        pass = pass && d * d <= t + kTol && t <= d + kTol;
        for (int k : {2, 3}) {
            double tk = t_param(p, k);
            pass = pass && std::pow(t, k) <= tk + kTol && tk <= t + kTol;
        }
        pass = pass && d + z >= 1.0 - kTol;
        pass = pass && pe <= std::min(1.0 - i_wv, 1.0) + kTol && pe <= z + kTol;
    }
    report(2, "parameter inequalities, same corpus", pass, now() - t0);
}

// ---------------------------------------------------------------- criterion 3
void criterion_level_martingales() {
    double t0 = now();
    bool pass = true;
    std::string detail;
    SynthesisBudget budget;
    struct Case {
        const char* w;
        const char* v;
    };
    // structured finite-I pairs whose exact alphabets stay within budget at n=6
    Case cases[] = {{"bec:0.5", "bec:0.5"}, {"bec:0.3", "bec:0.6"}, {"bsc:0.11", "bsc:0.11"},
                    {"bsc:0.2", "bsc:0.3"}, {"bsc:0.3", "bsc:0.45"}, {"bec:0.7", "bec:0.2"}};
    for (const auto& c : cases) {
        auto p = make_pair(make_channel(c.w), make_channel(c.v));
        double i0 = mmi(p);
        double prev_d = d_param(p);
        std::vector<ChannelPair> level{canonicalize(p, budget.merge_tol)};
        for (int n = 1; n <= 6; ++n) {
            std::vector<ChannelPair> next(level.size() * 2);
            for (std::size_t k = 0; k < level.size(); ++k) {
                next[2 * k] = minus_transform(level[k], budget);
                next[2 * k + 1] = plus_transform(level[k], budget);
            }
            level = std::move(next);
            Accum sum_i, sum_d;
            for (const auto& node : level) {
                sum_i.add(mmi(node));
                sum_d.add(d_param(node));
            }
            double mean_i = sum_i.value() / static_cast<double>(level.size());
            double mean_d = sum_d.value() / static_cast<double>(level.size());
            if (std::abs(mean_i - i0) > 1e-9) {
                pass = false;
                detail = std::string("[I-martingale broke at ") + c.w + "/" + c.v + "]";
            }
            if (mean_d > prev_d + 1e-12) {
                pass = false;
                detail = std::string("[D-supermartingale broke at ") + c.w + "/" + c.v + "]";
            }
            prev_d = mean_d;
        }
    }
    report(3, "level martingales to n=6", pass, now() - t0, detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_closed_forms() {
    double t0 = now();
    bool pass = true;
    Rng rng(4, 0);
    for (int trial = 0; trial < 100 && pass; ++trial) {
        double p = 0.01 + 0.98 * rng.u01();
        double q = 0.01 + 0.98 * rng.u01();
        auto pair_pq = make_pair(make_channel(oracle::spec("bsc", p)),
                                 make_channel(oracle::spec("bsc", q)));
        double expect = 1.0 - oracle::h2(p) - oracle::kl2(p, q);
        pass = pass && std::abs(mmi(pair_pq) - expect) <= 1e-12;
    }
    for (double p : {0.05, 0.35, 0.8})
        for (double q : {0.1, 0.5, 0.9}) {
            auto bec = make_pair(make_channel(oracle::spec("bec", p)),
                                 make_channel(oracle::spec("bec", q)));
            pass = pass && std::abs(mmi(bec) - (1.0 - p)) <= 1e-15;
        }
    auto bsc3 = Bdmc::from_rows({0.9, 0.1, 0.0}, {0.1, 0.9, 0.0});
    double inf_i = mmi(make_pair(bsc3, make_channel("bec:0.3")));
    pass = pass && std::isinf(inf_i) && inf_i < 0;
    report(4, "closed-form examples (BSC, BEC, BSC/BEC)", pass, now() - t0);
}

// ---------------------------------------------------------------- criterion 5
void criterion_inverted_bsc_end_to_end() {
    double t0 = now();
    auto w = make_channel("bsc:0.2");
    auto v = make_channel("bsc:0.8");
    auto p = make_pair(w, v);
    SynthesisBudget budget;

    bool symbols_ok = true;
    auto level4 = synthesize_level(p, 4, budget);
    for (std::size_t i = 0; i + 1 < level4.size(); ++i)  // every node except all-plus
        for (const auto& s : level4[i].symbols())
            if (!(std::abs(s.dv - s.dw) <= 1e-12)) symbols_ok = false;
    bool all_plus_differs = false;
    for (const auto& s : level4.back().symbols())
        all_plus_differs = all_plus_differs || s.dv != s.dw;
    symbols_ok = symbols_ok && all_plus_differs;

    bool sets_ok = true;
    auto matched = make_pair(w, w);
    for (double gamma : {0.1, 0.01}) {
        auto a = info_set_mismatched_threshold(p, 4, gamma, budget);
        auto b = info_set_mismatched_threshold(matched, 4, gamma, budget);
        if (a.info_set != b.info_set) sets_ok = false;
    }

    SynthesisBudget deep;
    deep.merge_tol = 8e-3;  // exact merging passes 2^20 symbols at level 7
    auto ledger = lower_bound_family(p, 10, deep);
    double iw = matched_params(w).I;
    bool ledger_ok = !ledger.truncated && ledger.levels.size() == 11;
    for (std::size_t i = 1; i < ledger.levels.size(); ++i)
        ledger_ok = ledger_ok && ledger.levels[i].bound >= ledger.levels[i - 1].bound - 1e-9;
    double gap = std::abs(ledger.levels.back().bound - iw);
    ledger_ok = ledger_ok && gap <= 0.05;
    double elapsed = now() - t0;
    ledger_ok = ledger_ok && elapsed < 60.0;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "[symbol equality %s; info-set equality %s (sets must differ at the all-plus "
                  "index once gamma exceeds its matched Pe = 0.0042 - see notes); |L_10 - I(W)| = "
                  "%.4f %s]",
                  symbols_ok ? "ok" : "BROKEN", sets_ok ? "ok" : "FAILS as stated", gap,
                  ledger_ok ? "ok" : "BROKEN");
    report(5, "BSC(0.2)/BSC(0.8) end to end", symbols_ok && sets_ok && ledger_ok, elapsed, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion_decoder_synthesis_oracle() {
    double t0 = now();
    bool pass = true;
    double worst = 0.0;
    Rng rng(6, 0);
    std::vector<oracle::MatrixPair> corpus = {
        oracle::bec_pair(0.5, 0.5),  oracle::bec_pair(0.3, 0.6),  oracle::bec_pair(0.9, 0.1),
        oracle::bsc_pair(0.11, 0.11), oracle::bsc_pair(0.2, 0.8), oracle::bsc_pair(0.06, 0.1),
        oracle::bsc_pair(0.3, 0.5),  oracle::bsc_pair(0.45, 0.2)};
    while (corpus.size() < 17) corpus.push_back(oracle::random_pair(rng, 2));
    while (corpus.size() < 20) corpus.push_back(oracle::random_pair(rng, 3));

    SynthesisBudget budget;
    for (const auto& m : corpus) {
        auto w = Bdmc::from_rows(m.w0, m.w1);
        auto v = Bdmc::from_rows(m.v0, m.v1);
        for (int n : {1, 2, 3}) {
            if (std::pow(static_cast<double>(m.size()), 1 << n) * std::pow(2.0, 1 << n) > 6e7)
                continue;
            auto genie = genie_per_bit_error_exact(n, w, v);
            auto level = synthesize_level(make_pair(w, v), n, budget);
            for (std::size_t i = 0; i < level.size(); ++i)
                worst = std::max(worst, std::abs(genie.per_index[i] - pe_ml(level[i])));
        }
    }
    pass = worst <= 1e-12;
    char detail[64];
    std::snprintf(detail, sizeof(detail), "[max |genie - pe_ml| = %.2e]", worst);
    report(6, "exhaustive genie equals synthesized Pe, N in {2,4,8}", pass, now() - t0, detail);
}

// ---------------------------------------------------------------- criterion 7
void criterion_coding_trend() {
    double t0 = now();
    bool pass = true;
    std::string detail;
    // Construction budgets differ per family so both land inside the 1e4-trial
    // measurement window: the mismatched pair runs at barely 45% of I(W,V),
    // where a finely tuned set drives the block error below resolution.
    auto run_family = [&](const char* wspec, const char* vspec, std::int64_t ctrials,
                          std::string& out) {
        auto w = make_channel(wspec);
        auto v = make_channel(vspec);
        double p_prev = -1.0;
        bool ok = true;
        for (int n : {8, 10}) {
            long k = static_cast<long>(0.3 * (1L << n));
            auto code = construct_genie_mc(w, v, n, k, ctrials, 1000 + n);
            auto rep = simulate_block_error(code, w, v, 10000, 2000 + n);
            double se = std::sqrt(std::max(rep.p_hat * (1 - rep.p_hat), 1e-8) / 10000.0);
            ok = ok && rep.p_hat <= code.genie_bound + 3 * se;
            if (n == 10) ok = ok && rep.p_hat < p_prev;
            char buf[64];
            std::snprintf(buf, sizeof(buf), " N=%d p=%.4g b=%.3g", 1 << n, rep.p_hat,
                          code.genie_bound);
            out += buf;
            p_prev = rep.p_hat;
        }
        return ok;
    };
    std::string d1, d2;
    pass = run_family("bsc:0.11", "bsc:0.11", 200000, d1) && pass;
    pass = run_family("bsc:0.06", "bsc:0.1", 2000, d2) && pass;
    double elapsed = now() - t0;
    pass = pass && elapsed < 120.0;
    report(7, "block error falls with N and respects the genie bound", pass, elapsed,
           "[matched" + d1 + "; mismatched" + d2 + "]");
}

// ---------------------------------------------------------------- criterion 8
void criterion_fast_polarization() {
    double t0 = now();
    // exact BEC(0.5) recursion to n=16, e and 1-e tracked separately
    std::vector<std::pair<double, double>> level{{0.5, 0.5}};
    bool monotone = true;
    double frac_lo = 0.0, frac_hi = 0.0, prev_lo = -1.0;
    std::string seq;
    for (int n = 1; n <= 16; ++n) {
        std::vector<std::pair<double, double>> next;
        next.reserve(level.size() * 2);
        for (auto [e, f] : level) {
            next.push_back({1.0 - f * f, f * f});  // minus
            next.push_back({e * e, 1.0 - e * e});  // plus
        }
        level = std::move(next);
        double threshold = std::pow(2.0, -std::pow(2.0, 0.4 * n));
        std::size_t lo = 0, hi = 0;
        for (auto [e, f] : level) {
            if (e < threshold) ++lo;   // Z < t
            if (f < threshold) ++hi;   // Z > 1 - t
        }
        frac_lo = static_cast<double>(lo) / static_cast<double>(level.size());
        frac_hi = static_cast<double>(hi) / static_cast<double>(level.size());
        if (prev_lo >= 0.0 && frac_lo < prev_lo) monotone = false;
        prev_lo = frac_lo;
        char buf[16];
        std::snprintf(buf, sizeof(buf), " %.3f", frac_lo);
        seq += buf;
    }
    bool near_half = std::abs(frac_lo - 0.5) <= 0.05 && std::abs(frac_hi - 0.5) <= 0.05;
    bool pass = monotone && near_half;
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "[frac_lo(n=1..16):%s; frac_hi(16)=%.3f; stated 0.5 +/- 0.05 target not reached "
                  "at n=16 - see notes]",
                  seq.c_str(), frac_hi);
    report(8, "fast-polarization fractions at beta=0.4", pass, now() - t0, detail);
}

// ---------------------------------------------------------------- criterion 9
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_runtime(std::string text) {
    auto at = text.find("\"runtime_s\"");
    if (at == std::string::npos) return text;
    auto end = text.find('\n', at);
    text.erase(at, end - at);
    return text;
}

void criterion_reproducibility() {
    double t0 = now();
    const char* cli = std::getenv("MISPOLAR_CLI");
    if (cli == nullptr) {
        report(9, "seeded CLI runs byte-identical", false, now() - t0, "[MISPOLAR_CLI unset]");
        return;
    }
    auto shell = [&](const std::string& args) {
        std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    bool pass = true;
    pass = pass && shell("synth --w bsc:0.06 --v bsc:0.1 -n 4 --out acc_s1.csv");
    pass = pass && shell("synth --w bsc:0.06 --v bsc:0.1 -n 4 --out acc_s2.csv");
    pass = pass && slurp("acc_s1.csv") == slurp("acc_s2.csv");
    pass = pass && shell("construct --w bec:0.4 -n 5 --rate 0.4 --out acc_code.json");
    pass = pass && shell("simulate --code acc_code.json --w bec:0.4 --trials 2000 --seed 99 --out acc_r1.json");
    pass = pass && shell("simulate --code acc_code.json --w bec:0.4 --trials 2000 --seed 99 --out acc_r2.json");
    pass = pass && strip_runtime(slurp("acc_r1.json")) == strip_runtime(slurp("acc_r2.json"));
    pass = pass && shell("trace --w bsc:0.11 --depth 6 --paths 256 --seed 5 --out acc_t1.csv");
    pass = pass && shell("trace --w bsc:0.11 --depth 6 --paths 256 --seed 5 --out acc_t2.csv");
    pass = pass && slurp("acc_t1.csv") == slurp("acc_t2.csv");
    pass = pass && shell("bounds --w bsc:0.2 --v bsc:0.8 --max-n 5 --out acc_b1.csv");
    pass = pass && shell("bounds --w bsc:0.2 --v bsc:0.8 --max-n 5 --out acc_b2.csv");
    pass = pass && slurp("acc_b1.csv") == slurp("acc_b2.csv");
    for (const char* f : {"acc_s1.csv", "acc_s2.csv", "acc_code.json", "acc_r1.json", "acc_r2.json",
                          "acc_t1.csv", "acc_t2.csv", "acc_b1.csv", "acc_b2.csv"})
        std::remove(f);
    report(9, "seeded CLI runs byte-identical", pass, now() - t0);
}

}  // namespace

int main() {
    criterion_transform_identities();
    criterion_parameter_inequalities();
    criterion_level_martingales();
    criterion_closed_forms();
    criterion_inverted_bsc_end_to_end();
    criterion_decoder_synthesis_oracle();
    criterion_coding_trend();
    criterion_fast_polarization();
    criterion_reproducibility();
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures;
}
