#pragma once

#include <stdexcept>
#include <string>

namespace shiftprod {

/// Precondition violation on an operation's arguments.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown by multiplicative_order when gcd(a, m) > 1.
struct NotInvertibleError : DomainError {
    using DomainError::DomainError;
};

/// A requested range exceeds the configured sieve ceiling (or a
/// materialization guard).
struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// A computation would exceed its configured size/effort budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A factorization-consuming operation received (or produced) an
/// incomplete factorization and refuses to guess.
struct IncompleteFactorizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Certificate file parse/validation failure.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace shiftprod
