#pragma once

#include <stdexcept>
#include <string>

namespace mixtest {

struct InvalidParam : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// HYP-1 violated: the weight Gram matrix is numerically singular, so the
// dual vectors cannot be computed stably.
struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mixtest
