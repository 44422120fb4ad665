// mispolar: polar coding over B-DMCs with a possibly mismatched SC decoder.
//
// Subcommands: info, synth, construct, simulate, bounds, trace.
// Exit codes: 0 ok, 2 spec/parse, 3 synthesis budget, 4 construction, 5
// simulation mismatch. POLAR_THREADS caps the worker pool.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mispolar/channel.hpp"
#include "mispolar/construct.hpp"
#include "mispolar/errors.hpp"
#include "mispolar/io.hpp"
#include "mispolar/mismatch.hpp"
#include "mispolar/montecarlo.hpp"
#include "mispolar/parallel.hpp"
#include "mispolar/polarize.hpp"

namespace {

using namespace mispolar;

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x < 0 ? "-inf" : "+inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecParseError("cannot open output file: " + path);
    out << content;
}

struct CommonOpts {
    std::string w_spec;
    std::string v_spec;
    std::size_t max_symbols = std::size_t{1} << 20;
    double merge_tol = 1e-12;

    SynthesisBudget budget() const { return {max_symbols, merge_tol}; }
    bool mismatched() const { return !v_spec.empty(); }
    Bdmc w() const { return make_channel(w_spec); }
    Bdmc v() const { return make_channel(v_spec.empty() ? w_spec : v_spec); }
};

void add_channel_opts(CLI::App* cmd, CommonOpts& opts, bool v_required = false) {
    cmd->add_option("--w", opts.w_spec, "true channel: bsc:<p>, bec:<e>, file:<path>")->required();
    auto* v = cmd->add_option("--v", opts.v_spec, "decoding metric channel (defaults to --w)");
    if (v_required) v->required();
}

void add_budget_opts(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--max-symbols", opts.max_symbols, "synthesis alphabet cap per channel");
    cmd->add_option("--merge-tol", opts.merge_tol, "delta merge tolerance (raise for deep levels)");
}

int run_info(const CommonOpts& opts) {
    auto w = opts.w();
    auto mp = matched_params(w);
    std::printf("I(W) = %s\n", fmt(mp.I).c_str());
    std::printf("Z(W) = %s\n", fmt(mp.Z).c_str());
    std::printf("T(W) = %s\n", fmt(mp.T).c_str());
    std::printf("D(W) = %s\n", fmt(mp.D).c_str());
    if (opts.mismatched()) {
        auto p = make_pair(w, opts.v());
        std::printf("I(W,V) = %s\n", fmt(mmi(p)).c_str());
        std::printf("D(W,V) = %s\n", fmt(d_param(p)).c_str());
        std::printf("T(W,V) = %s\n", fmt(t_param(p, 1)).c_str());
        std::printf("Z(W,V) = %s\n", fmt(z_mismatch(p)).c_str());
        std::printf("Pe_ML(W,V) = %s\n", fmt(pe_ml(p)).c_str());
    }
    return 0;
}

int run_synth(const CommonOpts& opts, int n, const std::string& out_path) {
    auto p = make_pair(opts.w(), opts.v());
    auto level = synthesize_level(p, n, opts.budget());
    std::string csv = "i,signs,I_W,Z_W,I_WV,D_WV,Z_WV,T_WV,Pe_ML\n";
    for (std::size_t idx = 0; idx < level.size(); ++idx) {
        const auto& node = level[idx];
        auto wstats = w_params(node);
        long i = static_cast<long>(idx) + 1;
        csv += std::to_string(i);
        csv += ',' + signs_to_string(signs_of(i, n));
        csv += ',' + csv_num(wstats.I);
        csv += ',' + csv_num(wstats.Z);
        csv += ',' + csv_num(mmi(node));
        csv += ',' + csv_num(d_param(node));
        csv += ',' + csv_num(z_mismatch(node));
        csv += ',' + csv_num(t_param(node, 1));
        csv += ',' + csv_num(pe_ml(node));
        csv += '\n';
    }
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else {
        write_file(out_path, csv);
        std::printf("wrote %zu rows to %s\n", level.size(), out_path.c_str());
    }
    return 0;
}

int run_construct(const CommonOpts& opts, int n, double rate, double gamma, std::string rule_arg,
                  const std::string& method, std::int64_t trials, std::uint64_t seed,
                  const std::string& out_path) {
    long size = 1L << n;
    bool size_form = !(rate < 0.0);
    PolarCode code;
    if (method == "genie") {
        if (!size_form) throw KTooLargeError("genie construction needs --rate");
        long k = static_cast<long>(rate * static_cast<double>(size));
        code = construct_genie_mc(opts.w(), opts.v(), n, k, trials, seed);
    } else {
        SelectionRule rule;
        if (!rule_arg.empty())
            rule = rule_from_name(rule_arg);
        else if (opts.mismatched())
            rule = SelectionRule::MismatchedPe;
        else
            rule = size_form ? SelectionRule::MatchedZ : SelectionRule::MatchedI;
        auto budget = opts.budget();
        if (rule == SelectionRule::MismatchedPe) {
            auto p = make_pair(opts.w(), opts.v());
            code = size_form
                       ? info_set_mismatched_size(p, n, static_cast<long>(rate * size), budget)
                       : info_set_mismatched_threshold(p, n, gamma, budget);
        } else if (rule == SelectionRule::MatchedZ) {
            if (!size_form) throw KTooLargeError("MATCHED_Z ranks by size; use --rate");
            code = info_set_matched_size(opts.w(), n, static_cast<long>(rate * size), budget);
        } else {
            if (size_form) throw KTooLargeError("MATCHED_I thresholds on I; use --gamma");
            code = info_set_matched_threshold(opts.w(), n, gamma, budget);
        }
    }
    code.provenance["w"] = opts.w_spec;
    code.provenance["v"] = opts.v_spec.empty() ? opts.w_spec : opts.v_spec;
    auto j = code_to_json(code);
    std::string text = j.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    std::printf("genie_bound = %s\n", fmt(code.genie_bound).c_str());
    if (!out_path.empty()) write_file(out_path, text);
    return 0;
}

int run_simulate(const std::string& code_path, const CommonOpts& opts, std::int64_t trials,
                 std::uint64_t seed, const std::string& out_path, bool randomize_frozen) {
    std::ifstream in(code_path);
    if (!in) throw SpecParseError("cannot open code file: " + code_path);
    nlohmann::json cj;
    try {
        in >> cj;
    } catch (const std::exception& e) {
        throw SpecParseError(std::string("bad code JSON: ") + e.what());
    }
    auto code = code_from_json(cj);
    if (randomize_frozen) {
        Rng rng(seed ^ 0xF5A5A5A5A5A5A5A5ULL, 0);
        auto mask = code.info_mask();
        for (long i = 0; i < code.block_size(); ++i)
            if (!mask[static_cast<std::size_t>(i)])
                code.frozen_values[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.bit());
    }
    auto report = simulate_block_error(code, opts.w(), opts.v(), trials, seed);
    std::string text = report_to_json(report).dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) write_file(out_path, text);
    return 0;
}

int run_bounds(const CommonOpts& opts, int max_n, const std::string& out_path) {
    auto p = make_pair(opts.w(), opts.v());
    auto ledger = lower_bound_family(p, max_n, opts.budget());
    if (ledger.truncated)
        std::fprintf(stderr, "note: budget exhausted, ledger truncated at n = %d\n",
                     ledger.levels.empty() ? 0 : ledger.levels.back().n);
    std::string csv = ledger_to_csv(ledger);
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else {
        write_file(out_path, csv);
        std::printf("wrote %zu levels to %s%s\n", ledger.levels.size(), out_path.c_str(),
                    ledger.truncated ? " (truncated)" : "");
    }
    return 0;
}

int run_trace(const CommonOpts& opts, int depth, std::int64_t paths, std::uint64_t seed,
              double gamma, const std::string& out_path, const std::string& format) {
    auto p = make_pair(opts.w(), opts.v());
    auto trace = sample_paths(p, depth, paths, seed, gamma, opts.budget());
    std::string text = format == "json" ? trace_to_json(trace).dump(2) + "\n" : trace_to_csv(trace);
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else {
        write_file(out_path, text);
        std::printf("wrote %d depths to %s\n", trace.depth, out_path.c_str());
    }
    if (trace.truncated_paths > 0)
        std::fprintf(stderr, "note: %lld paths truncated by the synthesis budget\n",
                     static_cast<long long>(trace.truncated_paths));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar coding over B-DMCs with mismatched SC decoding"};
    app.require_subcommand(1);

    CommonOpts info_opts;
    auto* cmd_info = app.add_subcommand("info", "matched and mismatched channel parameters");
    add_channel_opts(cmd_info, info_opts);

    CommonOpts synth_opts;
    int synth_n = 1;
    std::string synth_out;
    auto* cmd_synth = app.add_subcommand("synth", "parameters of all 2^n synthesized pairs");
    add_channel_opts(cmd_synth, synth_opts);
    cmd_synth->add_option("-n", synth_n, "transform depth")->required()->check(CLI::Range(0, 20));
    cmd_synth->add_option("--out", synth_out, "CSV output path");
    add_budget_opts(cmd_synth, synth_opts);

    CommonOpts cons_opts;
    int cons_n = 1;
    double cons_rate = -1.0, cons_gamma = -1.0;
    std::string cons_rule, cons_method = "exact", cons_out;
    std::int64_t cons_trials = 20000;
    std::uint64_t cons_seed = 1;
    auto* cmd_cons = app.add_subcommand("construct", "build an information set");
    add_channel_opts(cmd_cons, cons_opts);
    cmd_cons->add_option("-n", cons_n, "transform depth")->required()->check(CLI::Range(0, 20));
    auto* rate_opt = cmd_cons->add_option("--rate", cons_rate, "code rate K/N");
    auto* gamma_opt = cmd_cons->add_option("--gamma", cons_gamma, "threshold form");
    rate_opt->excludes(gamma_opt);
    gamma_opt->excludes(rate_opt);
    cmd_cons->add_option("--rule", cons_rule, "MATCHED_I | MATCHED_Z | MISMATCHED_PE");
    cmd_cons->add_option("--method", cons_method, "exact | genie")
        ->check(CLI::IsMember({"exact", "genie"}));
    cmd_cons->add_option("--trials", cons_trials, "genie construction trials");
    cmd_cons->add_option("--seed", cons_seed, "genie construction seed");
    cmd_cons->add_option("--out", cons_out, "code JSON output path");
    add_budget_opts(cmd_cons, cons_opts);

    CommonOpts sim_opts;
    std::string sim_code, sim_out;
    std::int64_t sim_trials = 10000;
    std::uint64_t sim_seed = 1;
    bool sim_randomize_frozen = false;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo block error rate");
    cmd_sim->add_option("--code", sim_code, "code JSON path")->required();
    add_channel_opts(cmd_sim, sim_opts);
    cmd_sim->add_option("--trials", sim_trials, "trial count");
    cmd_sim->add_option("--seed", sim_seed, "RNG seed");
    cmd_sim->add_flag("--randomize-frozen", sim_randomize_frozen,
                      "draw random frozen values from the seed before simulating");
    cmd_sim->add_option("--out", sim_out, "report JSON output path");

    CommonOpts bounds_opts;
    int bounds_max_n = 6;
    std::string bounds_out;
    auto* cmd_bounds = app.add_subcommand("bounds", "lower-bound ledger on the polar mismatched capacity");
    add_channel_opts(cmd_bounds, bounds_opts, true);
    cmd_bounds->add_option("--max-n", bounds_max_n, "deepest level")->check(CLI::Range(0, 20));
    cmd_bounds->add_option("--out", bounds_out, "CSV output path");
    add_budget_opts(cmd_bounds, bounds_opts);

    CommonOpts trace_opts;
    int trace_depth = 8;
    std::int64_t trace_paths = 1024;
    std::uint64_t trace_seed = 1;
    double trace_gamma = 0.1;
    std::string trace_out, trace_format = "csv";
    auto* cmd_trace = app.add_subcommand("trace", "sample polarization-process paths");
    add_channel_opts(cmd_trace, trace_opts);
    cmd_trace->add_option("--depth", trace_depth, "path depth")->check(CLI::Range(1, 40));
    cmd_trace->add_option("--paths", trace_paths, "number of sampled paths");
    cmd_trace->add_option("--seed", trace_seed, "RNG seed");
    cmd_trace->add_option("--gamma", trace_gamma, "fraction threshold");
    cmd_trace->add_option("--out", trace_out, "output path");
    cmd_trace->add_option("--format", trace_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    add_budget_opts(cmd_trace, trace_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_info->parsed()) return run_info(info_opts);
        if (cmd_synth->parsed()) return run_synth(synth_opts, synth_n, synth_out);
        if (cmd_cons->parsed()) {
            if (cons_rate < 0.0 && cons_gamma < 0.0)
                throw KTooLargeError("construct needs exactly one of --rate/--gamma");
            return run_construct(cons_opts, cons_n, cons_rate, cons_gamma, cons_rule, cons_method,
                                 cons_trials, cons_seed, cons_out);
        }
        if (cmd_sim->parsed())
            return run_simulate(sim_code, sim_opts, sim_trials, sim_seed, sim_out, sim_randomize_frozen);
        if (cmd_bounds->parsed()) return run_bounds(bounds_opts, bounds_max_n, bounds_out);
        if (cmd_trace->parsed())
            return run_trace(trace_opts, trace_depth, trace_paths, trace_seed, trace_gamma,
                             trace_out, trace_format);
    } catch (const BudgetExceededError& e) {
        std::fprintf(stderr, "budget exceeded at depth %d: %s\n", e.depth, e.what());
        return 3;
    } catch (const KTooLargeError& e) {
        std::fprintf(stderr, "construction error: %s\n", e.what());
        return 4;
    } catch (const SimulationMismatchError& e) {
        std::fprintf(stderr, "simulation mismatch: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
