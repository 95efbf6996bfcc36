#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace shiftprod {

using BigInt = mpz_class;

/// a*b mod m without overflow (128-bit intermediate). m >= 2.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);

/// base^exp mod modulus by binary exponentiation. modulus >= 2.
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t modulus);

/// Arbitrary-precision variant. modulus >= 2, exp >= 0.
BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus);

/// Largest odd divisor of m. m >= 1.
std::uint64_t odd_part(std::uint64_t m);

/// Least d >= 1 with a^d = 1 (mod m). Requires gcd(a, m) = 1; throws
/// NotInvertibleError otherwise. For prime m the group order m-1 is
/// factored internally; for composite m the Carmichael function is
/// derived from the factorization of m.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m);

/// The k with p^k || m (p^k divides m, p^(k+1) does not). p >= 2, m >= 1.
unsigned exact_valuation(std::uint64_t p, std::uint64_t m);
unsigned exact_valuation(const BigInt& p, BigInt m);

/// Product of the odd integers in [1, d]. d must be odd.
BigInt odd_double_factorial(std::uint64_t d);

/// Terms of the recursively defined sequence
///   D_1 = 16r + 1,  D_{i+1} = 16r * D_i!! + 1
/// where !! is the odd double factorial. Terms explode extremely fast;
/// a term whose predecessor exceeds `term_limit` raises BudgetError.
std::vector<BigInt> d_sequence(std::uint64_t r, std::size_t count,
                               std::uint64_t term_limit = 100'000'000);

} // namespace shiftprod
