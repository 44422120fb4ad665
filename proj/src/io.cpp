#include "mispolar/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mispolar/errors.hpp"

namespace mispolar {

std::string csv_num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

nlohmann::json json_num(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
    return x;
}

nlohmann::json code_to_json(const PolarCode& code) {
    nlohmann::json frozen = nlohmann::json::object();
    auto mask = code.info_mask();
    for (long i = 0; i < code.block_size(); ++i)
        if (!mask[static_cast<std::size_t>(i)])
            frozen[std::to_string(i + 1)] = code.frozen_values.empty()
                                                ? 0
                                                : static_cast<int>(code.frozen_values[static_cast<std::size_t>(i)]);
    return {{"n", code.n},
            {"info_set", code.info_set},
            {"frozen", frozen},
            {"rule", rule_name(code.rule)},
            {"provenance", code.provenance},
            {"genie_bound", json_num(code.genie_bound)}};
}

PolarCode code_from_json(const nlohmann::json& j) {
    PolarCode code;
    try {
        code.n = j.at("n").get<int>();
        if (code.n < 0 || code.n > 30) throw SpecParseError("code level out of range");
        code.info_set = j.at("info_set").get<std::vector<std::int32_t>>();
        code.frozen_values.assign(static_cast<std::size_t>(1) << code.n, 0);
        for (const auto& [key, value] : j.at("frozen").items()) {
            long idx = std::stol(key);
            if (idx < 1 || idx > code.block_size()) throw SpecParseError("frozen index out of range");
            code.frozen_values[static_cast<std::size_t>(idx - 1)] =
                static_cast<std::uint8_t>(value.get<int>() & 1);
        }
        code.rule = rule_from_name(j.at("rule").get<std::string>());
        if (j.contains("provenance")) code.provenance = j.at("provenance");
        code.genie_bound = std::numeric_limits<double>::quiet_NaN();
        if (j.contains("genie_bound") && j.at("genie_bound").is_number())
            code.genie_bound = j.at("genie_bound").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw SpecParseError(std::string("bad code JSON: ") + e.what());
    }
    std::sort(code.info_set.begin(), code.info_set.end());
    for (std::int32_t i : code.info_set)
        if (i < 1 || i > code.block_size()) throw SpecParseError("info index out of range");
    return code;
}

nlohmann::json report_to_json(const SimReport& report) {
    return {{"trials", report.trials},
            {"block_errors", report.block_errors},
            {"p_hat", report.p_hat},
            {"ci95", {report.ci_lo, report.ci_hi}},
            {"seed", report.seed},
            {"genie_bound", json_num(report.genie_bound)},
            {"runtime_s", report.runtime_s}};
}

nlohmann::json trace_to_json(const PolarizationTrace& trace) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lv : trace.levels) {
        levels.push_back({{"depth", lv.depth},
                          {"alive", lv.alive},
                          {"I", {{"mean", json_num(lv.mean_i)}, {"q10", json_num(lv.q10_i)},
                                 {"q50", json_num(lv.q50_i)}, {"q90", json_num(lv.q90_i)}}},
                          {"D", {{"mean", json_num(lv.mean_d)}, {"q10", json_num(lv.q10_d)},
                                 {"q50", json_num(lv.q50_d)}, {"q90", json_num(lv.q90_d)}}},
                          {"Z", {{"mean", json_num(lv.mean_z)}, {"q10", json_num(lv.q10_z)},
                                 {"q50", json_num(lv.q50_z)}, {"q90", json_num(lv.q90_z)}}},
                          {"T", {{"mean", json_num(lv.mean_t)}, {"q10", json_num(lv.q10_t)},
                                 {"q50", json_num(lv.q50_t)}, {"q90", json_num(lv.q90_t)}}},
                          {"frac_pe_low", lv.frac_pe_low},
                          {"frac_mid", lv.frac_mid},
                          {"frac_pe_high", lv.frac_pe_high}});
    }
    return {{"depth", trace.depth},
            {"paths", trace.paths},
            {"seed", trace.seed},
            {"gamma", trace.gamma},
            {"truncated_paths", trace.truncated_paths},
            {"levels", levels}};
}

std::string trace_to_csv(const PolarizationTrace& trace) {
    std::string out = "depth,mean_I,mean_D,mean_Z,frac_mid,frac_pe_low,frac_pe_high\n";
    for (const auto& lv : trace.levels) {
        out += std::to_string(lv.depth);
        out += ',' + csv_num(lv.mean_i);
        out += ',' + csv_num(lv.mean_d);
        out += ',' + csv_num(lv.mean_z);
        out += ',' + csv_num(lv.frac_mid);
        out += ',' + csv_num(lv.frac_pe_low);
        out += ',' + csv_num(lv.frac_pe_high);
        out += '\n';
    }
    return out;
}

std::string ledger_to_csv(const BoundLedger& ledger) {
    std::string out = "n,L_n\n";
    for (const auto& lv : ledger.levels) {
        out += std::to_string(lv.n);
        out += ',' + csv_num(lv.bound);
        out += '\n';
    }
    return out;
}

}  // namespace mispolar
