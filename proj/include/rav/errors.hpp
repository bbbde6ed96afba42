#pragma once

#include <stdexcept>

namespace rav {

/// Base class for all toolkit faults.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's contract (width mismatch, bad label, ...).
struct ContractError : Error {
    using Error::Error;
};

/// An exhaustive operation would exceed the configured budget.
struct BudgetExceededError : Error {
    using Error::Error;
};

/// A cached artifact was re-derived with a different payload.
struct DivergenceError : Error {
    using Error::Error;
};

/// Filesystem failure in the store or file codecs.
struct IoError : Error {
    using Error::Error;
};

/// Malformed textual or binary input.
struct ParseError : Error {
    using Error::Error;
};

} // namespace rav
