// Code and ledger value types shared by construction, coding and the CLI.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace mispolar {

enum class SelectionRule : std::uint8_t { MatchedI, MatchedZ, MismatchedPe };

std::string rule_name(SelectionRule rule);
SelectionRule rule_from_name(const std::string& name);

struct PolarCode {
    int n = 0;
    std::vector<std::int32_t> info_set;       // sorted ascending, 1-based
    std::vector<std::uint8_t> frozen_values;  // size 2^n, indexed 0-based; info positions unused
    SelectionRule rule = SelectionRule::MatchedZ;
    nlohmann::json provenance;
    double genie_bound = std::numeric_limits<double>::quiet_NaN();

    long block_size() const { return 1L << n; }
    long info_length() const { return static_cast<long>(info_set.size()); }
    std::vector<std::uint8_t> info_mask() const;  // size 2^n, 1 at info positions
};

struct BoundLedger {
    struct Level {
        int n;
        double bound;
    };
    std::vector<Level> levels;
    bool truncated = false;  // budget ran out before max_n
};

}  // namespace mispolar
