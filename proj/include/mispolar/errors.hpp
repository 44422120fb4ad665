// Error types shared across the library. Each maps to one CLI exit code.

#pragma once

#include <stdexcept>
#include <string>

namespace mispolar {

struct SpecParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonStochasticError : SpecParseError {
    using SpecParseError::SpecParseError;
};

struct OutOfRangeError : SpecParseError {
    using SpecParseError::SpecParseError;
};

struct EmptyAlphabetError : SpecParseError {
    using SpecParseError::SpecParseError;
};

struct AlphabetMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceededError : std::runtime_error {
    int depth;  // transform depth at which the budget was hit (1-based, 0 = input)
    explicit BudgetExceededError(const std::string& what, int depth_ = 0)
        : std::runtime_error(what), depth(depth_) {}
};

struct IndexOutOfRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LengthMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExactInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulationMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mispolar
