// Machine-readable output: the JSON and CSV schemas the CLI commits to.
// Infinities render as "-inf"/"inf" ("+inf" for the signed positive case in
// tables), doubles as shortest-round-trip JSON numbers or %.12g CSV fields.

#pragma once

#include <string>

#include <json.hpp>

#include "mispolar/construct_types.hpp"
#include "mispolar/montecarlo.hpp"

namespace mispolar {

std::string csv_num(double x);

nlohmann::json json_num(double x);  // non-finite -> string tag

nlohmann::json code_to_json(const PolarCode& code);
PolarCode code_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SimReport& report);

nlohmann::json trace_to_json(const PolarizationTrace& trace);

// depth,mean_I,mean_D,mean_Z,frac_mid,frac_pe_low,frac_pe_high
std::string trace_to_csv(const PolarizationTrace& trace);

// n,L_n
std::string ledger_to_csv(const BoundLedger& ledger);

}  // namespace mispolar
