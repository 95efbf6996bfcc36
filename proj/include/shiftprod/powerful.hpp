#pragma once

#include <cstdint>

#include "shiftprod/factor.hpp"

namespace shiftprod {

/// True iff every prime exponent is >= 2 (1 is vacuously powerful).
bool is_powerful(const Factorization& f);

/// Same predicate on an arbitrary-precision factorization. Refuses to
/// guess on incomplete input: throws IncompleteFactorizationError.
bool is_powerful(const BigFactorization& f);

/// Factorizes m and applies the predicate. m >= 1.
bool is_powerful(std::uint64_t m);

} // namespace shiftprod
