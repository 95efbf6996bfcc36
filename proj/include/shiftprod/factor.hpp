#pragma once

#include <cstdint>
#include <vector>

#include "shiftprod/arith.hpp"

namespace shiftprod {

/// Complete factorization of a machine-width integer.
/// Primes are strictly increasing; the empty list represents 1.
struct Factorization {
    struct Entry {
        std::uint64_t prime;
        unsigned exponent;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    std::uint64_t value() const;
    bool operator==(const Factorization&) const = default;
};

/// Deterministic primality for the full 64-bit range (Miller-Rabin with
/// a witness set proven complete far beyond 2^64).
bool is_prime(std::uint64_t m);

/// Complete factorization by trial division plus Brent's variant of
/// Pollard rho. m >= 1.
Factorization factorize(std::uint64_t m);

/// Euler phi from a complete factorization.
std::uint64_t euler_phi(const Factorization& f);

struct FactorBudget {
    std::uint64_t trial_limit = 1'000'000;   // trial-divide by primes up to this
    std::uint64_t rho_iterations = 20'000'000; // total rho work across all splits
};

/// Factorization of an arbitrary-precision integer. `cofactor` is the
/// unfactored remainder (1 when the factorization is complete). Entries
/// above machine width are certified only by a BPSW-style probable-prime
/// test and carry certified = false.
struct BigFactorization {
    struct Entry {
        BigInt prime;
        unsigned exponent;
        bool certified;
    };
    std::vector<Entry> entries;
    BigInt cofactor{1};

    bool complete() const { return cofactor == 1; }
    BigInt value() const;
};

/// Trial division up to budget.trial_limit, then Pollard rho (Brent) with
/// a fixed deterministic seed sequence. Never guesses: if the budget runs
/// out the result is flagged incomplete via a cofactor > 1.
BigFactorization factorize_big(const BigInt& m, const FactorBudget& budget = {});

} // namespace shiftprod
