#include "shiftprod/arith.hpp"

#include <bit>
#include <numeric>

#include "shiftprod/errors.hpp"
#include "shiftprod/factor.hpp"

namespace shiftprod {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t modulus) {
    if (modulus < 2)
        throw DomainError("mod_pow: modulus must be >= 2");
    std::uint64_t result = 1 % modulus;
    std::uint64_t b = base % modulus;
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, b, modulus);
        exp >>= 1;
        if (exp)
            b = mul_mod(b, b, modulus);
    }
    return result;
}

BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
    if (modulus < 2)
        throw DomainError("mod_pow: modulus must be >= 2");
    if (exp < 0)
        throw DomainError("mod_pow: exponent must be >= 0");
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

std::uint64_t odd_part(std::uint64_t m) {
    if (m == 0)
        throw DomainError("odd_part: argument must be >= 1");
    return m >> std::countr_zero(m);
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
    if (m < 2)
        throw DomainError("multiplicative_order: modulus must be >= 2");
    a %= m;
    if (std::gcd(a, m) != 1)
        throw NotInvertibleError("multiplicative_order: gcd(a, m) > 1");

    // Candidate multiple of the order: m-1 for prime m, otherwise the
    // Carmichael function assembled from the factorization of m.
    std::uint64_t candidate;
    if (is_prime(m)) {
        candidate = m - 1;
    } else {
        candidate = 1;
        for (const auto& [p, e] : factorize(m).entries) {
            std::uint64_t lam;
            if (p == 2)
                lam = e == 1 ? 1 : (e == 2 ? 2 : std::uint64_t(1) << (e - 2));
            else {
                lam = p - 1;
                for (unsigned i = 1; i < e; ++i)
                    lam *= p;
            }
            candidate = std::lcm(candidate, lam);
        }
    }

    // Reduce the candidate prime by prime.
    std::uint64_t order = candidate;
    for (const auto& [p, e] : factorize(candidate).entries) {
        for (unsigned i = 0; i < e; ++i) {
            std::uint64_t reduced = order / p;
            if (mod_pow(a, reduced, m) == 1)
                order = reduced;
            else
                break;
        }
    }
    return order;
}

unsigned exact_valuation(std::uint64_t p, std::uint64_t m) {
    if (p < 2)
        throw DomainError("exact_valuation: p must be >= 2");
    if (m == 0)
        throw DomainError("exact_valuation: m must be >= 1");
    unsigned k = 0;
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    return k;
}

unsigned exact_valuation(const BigInt& p, BigInt m) {
    if (p < 2)
        throw DomainError("exact_valuation: p must be >= 2");
    if (m == 0)
        throw DomainError("exact_valuation: m must be >= 1");
    if (m == 1)
        return 0;
    BigInt q;
    return static_cast<unsigned>(
        mpz_remove(q.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

BigInt odd_double_factorial(std::uint64_t d) {
    if (d % 2 == 0)
        throw DomainError("odd_double_factorial: argument must be odd");
    // mpz_2fac_ui computes n!! with the usual step-2 convention.
    BigInt r;
    mpz_2fac_ui(r.get_mpz_t(), d);
    return r;
}

std::vector<BigInt> d_sequence(std::uint64_t r, std::size_t count,
                               std::uint64_t term_limit) {
    if (r < 1)
        throw DomainError("d_sequence: r must be >= 1");
    std::vector<BigInt> terms;
    terms.reserve(count);
    if (count == 0)
        return terms;
    BigInt current = 16 * BigInt(r) + 1;
    terms.push_back(current);
    while (terms.size() < count) {
        // The next term needs current!!, a product of (current+1)/2 factors.
        if (current > term_limit)
            throw BudgetError("d_sequence: next term needs the double factorial of " +
                              current.get_str() + ", beyond the term limit");
        BigInt df;
        mpz_2fac_ui(df.get_mpz_t(), current.get_ui());
        current = 16 * BigInt(r) * df + 1;
        terms.push_back(current);
    }
    return terms;
}

} // namespace shiftprod
