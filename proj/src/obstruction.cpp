#include "shiftprod/obstruction.hpp"

#include <numeric>

#include "shiftprod/errors.hpp"
#include "shiftprod/factor.hpp"

namespace shiftprod {

bool obstruction_holds(std::uint64_t p, std::uint64_t ell) {
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw DomainError("obstruction_holds: p must be an odd prime");
    if (ell % 2 == 0)
        throw DomainError("obstruction_holds: exponent must be odd");
    // gcd(p(p-1), l) = 1 without forming the overflowing product.
    return std::gcd(p, ell) == 1 && std::gcd(p - 1, ell) == 1;
}

std::optional<ObstructionWitness>
find_obstruction_prime(std::uint64_t n, const std::vector<std::uint64_t>& ell_factors,
                       const SieveOptions& opts) {
    if (n < 1)
        throw DomainError("find_obstruction_prime: n must be >= 1");
    for (std::size_t i = 0; i < ell_factors.size(); ++i) {
        const std::uint64_t q = ell_factors[i];
        if (q < 3 || q % 2 == 0 || !is_prime(q))
            throw DomainError("find_obstruction_prime: factors must be odd primes");
        if (i && ell_factors[i] <= ell_factors[i - 1])
            throw DomainError("find_obstruction_prime: factors must be ascending and distinct");
    }

    std::optional<ObstructionWitness> found;
    const std::uint64_t lo = window_first(n) - 1;
    for_each_prime(lo, n + 1,
                   [&](std::uint64_t p) {
                       if (p == 2)
                           return true; // the window lemma needs odd p
                       for (std::uint64_t q : ell_factors) {
                           if (p == q || p % q == 1)
                               return true;
                       }
                       found = ObstructionWitness{p, n};
                       return false; // smallest witness wins
                   },
                   opts);
    return found;
}

} // namespace shiftprod
