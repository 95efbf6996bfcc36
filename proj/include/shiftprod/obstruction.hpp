#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shiftprod/sieve.hpp"

namespace shiftprod {

/// True iff gcd(p(p-1), l) = 1, i.e. p is an obstruction prime for l:
/// if additionally p lies in P(n), the product over [1, n] cannot be
/// powerful. p must be an odd prime and l odd.
bool obstruction_holds(std::uint64_t p, std::uint64_t ell);

struct ObstructionWitness {
    std::uint64_t p = 0; // odd prime in P(n)
    std::uint64_t n = 0;
};

/// Scans P(n) in ascending order for an odd prime p outside ell_factors
/// with p != 1 (mod q) for every q in ell_factors; such p obstructs every
/// exponent l whose odd prime factors are contained in the set. Returns
/// the smallest witness, or nullopt. ell_factors must be distinct odd
/// primes.
std::optional<ObstructionWitness>
find_obstruction_prime(std::uint64_t n, const std::vector<std::uint64_t>& ell_factors,
                       const SieveOptions& opts = {});

} // namespace shiftprod
