#include "shiftprod/factor.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "shiftprod/errors.hpp"

namespace shiftprod {
namespace {

constexpr std::array<std::uint64_t, 12> kMillerRabinWitnesses = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin(std::uint64_t n, std::uint64_t a) {
    std::uint64_t d = n - 1;
    unsigned s = std::countr_zero(d);
    d >>= s;
    std::uint64_t x = mod_pow(a % n, d, n);
    if (x == 1 || x == n - 1)
        return true;
    for (unsigned i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1)
            return true;
    }
    return false;
}

std::uint64_t rho_step(std::uint64_t y, std::uint64_t c, std::uint64_t n) {
    std::uint64_t v = mul_mod(y, y, n);
    v += c;
    if (v < c || v >= n) // wrapped or above n
        v -= n;
    return v;
}

std::uint64_t pollard_brent(std::uint64_t n, std::uint64_t c) {
    // Brent cycle detection with batched gcd; f(x) = x^2 + c mod n.
    std::uint64_t x = 2, y = 2, d = 1, q = 1, ys = y;
    std::uint64_t r = 1;
    const std::uint64_t batch = 128;
    while (d == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i)
            y = rho_step(y, c, n);
        std::uint64_t k = 0;
        while (k < r && d == 1) {
            ys = y;
            const std::uint64_t lim = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = rho_step(y, c, n);
                q = mul_mod(q, x > y ? x - y : y - x, n);
            }
            d = std::gcd(q, n);
            k += lim;
        }
        r <<= 1;
    }
    if (d == n) {
        do {
            ys = rho_step(ys, c, n);
            d = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (d == 1);
    }
    return d;
}

void split_u64(std::uint64_t m, std::map<std::uint64_t, unsigned>& out) {
    if (m == 1)
        return;
    if (is_prime(m)) {
        ++out[m];
        return;
    }
    // Deterministic seed sequence keeps runs reproducible.
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t d = pollard_brent(m, c);
        if (d != m && d != 1) {
            split_u64(d, out);
            split_u64(m / d, out);
            return;
        }
    }
}

void factor_u64_into(std::uint64_t m, std::map<std::uint64_t, unsigned>& out) {
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull, 41ull, 43ull, 47ull}) {
        while (m % p == 0) {
            ++out[p];
            m /= p;
        }
    }
    for (std::uint64_t p = 53; p <= 997 && p * p <= m; p += (p % 6 == 5) ? 2 : 4) {
        while (m % p == 0) {
            ++out[p];
            m /= p;
        }
    }
    split_u64(m, out);
}

// Shared trial-division primes, grown on demand.
std::shared_ptr<const std::vector<std::uint32_t>> trial_primes(std::uint64_t limit) {
    static std::mutex mu;
    static std::shared_ptr<const std::vector<std::uint32_t>> cache;
    static std::uint64_t cached_limit = 0;

    std::scoped_lock lock(mu);
    if (!cache || limit > cached_limit) {
        std::vector<char> composite(limit + 1, 0);
        auto primes = std::make_shared<std::vector<std::uint32_t>>();
        for (std::uint64_t p = 2; p <= limit; ++p) {
            if (composite[p])
                continue;
            primes->push_back(static_cast<std::uint32_t>(p));
            for (std::uint64_t q = p * p; q <= limit; q += p)
                composite[q] = 1;
        }
        cache = std::move(primes);
        cached_limit = limit;
    }
    return cache;
}

bool fits_u64(const BigInt& z) {
    return mpz_sizeinbase(z.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& z) {
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, -1, sizeof(r), 0, 0, z.get_mpz_t());
    return r;
}

BigInt rho_big(const BigInt& n, std::uint64_t c, std::uint64_t max_iters,
               std::uint64_t& used) {
    BigInt x = 2, y = 2, d = 1, q = 1, ys = y;
    std::uint64_t r = 1;
    const std::uint64_t batch = 128;
    while (d == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i)
            y = (y * y + c) % n;
        std::uint64_t k = 0;
        while (k < r && d == 1) {
            ys = y;
            const std::uint64_t lim = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < lim; ++i) {
                y = (y * y + c) % n;
                q = q * (x > y ? x - y : y - x) % n;
            }
            mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
            used += lim;
            if (used > max_iters)
                return 0; // budget exhausted
        }
        r <<= 1;
    }
    if (d == n) {
        do {
            ys = (ys * ys + c) % n;
            BigInt diff = x > ys ? x - ys : ys - x;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            if (++used > max_iters)
                return 0;
        } while (d == 1);
    }
    return d;
}

struct BigAcc {
    std::map<BigInt, std::pair<unsigned, bool>> primes; // prime -> (exp, certified)
    BigInt cofactor = 1;
};

// 0 composite, 1 probable prime, 2 certified prime
int probe_prime(const BigInt& z) {
    if (fits_u64(z))
        return is_prime(to_u64(z)) ? 2 : 0;
    return mpz_probab_prime_p(z.get_mpz_t(), 32) ? 1 : 0;
}

void split_big(const BigInt& m, BigAcc& acc, std::uint64_t max_iters,
               std::uint64_t& used) {
    if (m == 1)
        return;
    if (fits_u64(m)) {
        std::map<std::uint64_t, unsigned> small;
        factor_u64_into(to_u64(m), small);
        for (const auto& [p, e] : small) {
            auto& slot = acc.primes[BigInt(static_cast<unsigned long>(p))];
            slot.first += e;
            slot.second = true;
        }
        return;
    }
    int pr = probe_prime(m);
    if (pr > 0) {
        auto& slot = acc.primes[m];
        slot.first += 1;
        slot.second = (pr == 2);
        return;
    }
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        for (unsigned k = 2; k <= mpz_sizeinbase(m.get_mpz_t(), 2); ++k) {
            BigInt root;
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) {
                BigAcc sub;
                split_big(root, sub, max_iters, used);
                if (sub.cofactor != 1)
                    break; // give rho a chance on m itself
                for (const auto& [p, ec] : sub.primes) {
                    auto& slot = acc.primes[p];
                    slot.first += ec.first * k;
                    slot.second = ec.second;
                }
                return;
            }
        }
    }
    for (std::uint64_t c = 1; c <= 64; ++c) {
        if (used > max_iters)
            break;
        BigInt d = rho_big(m, c, max_iters, used);
        if (d == 0)
            break;
        if (d != 1 && d != m) {
            split_big(d, acc, max_iters, used);
            split_big(m / d, acc, max_iters, used);
            return;
        }
    }
    acc.cofactor *= m;
}

} // namespace

bool is_prime(std::uint64_t m) {
    if (m < 2)
        return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (m == p)
            return true;
        if (m % p == 0)
            return false;
    }
    for (std::uint64_t a : kMillerRabinWitnesses)
        if (!miller_rabin(m, a))
            return false;
    return true;
}

std::uint64_t Factorization::value() const {
    std::uint64_t v = 1;
    for (const auto& [p, e] : entries)
        for (unsigned i = 0; i < e; ++i)
            v *= p;
    return v;
}

Factorization factorize(std::uint64_t m) {
    if (m == 0)
        throw DomainError("factorize: argument must be >= 1");
    std::map<std::uint64_t, unsigned> acc;
    factor_u64_into(m, acc);
    Factorization f;
    f.entries.reserve(acc.size());
    for (const auto& [p, e] : acc)
        f.entries.push_back({p, e});
    return f;
}

std::uint64_t euler_phi(const Factorization& f) {
    std::uint64_t phi = 1;
    for (const auto& [p, e] : f.entries) {
        phi *= p - 1;
        for (unsigned i = 1; i < e; ++i)
            phi *= p;
    }
    return phi;
}

BigInt BigFactorization::value() const {
    BigInt v = cofactor;
    for (const auto& entry : entries) {
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), entry.prime.get_mpz_t(), entry.exponent);
        v *= pe;
    }
    return v;
}

BigFactorization factorize_big(const BigInt& m, const FactorBudget& budget) {
    if (m < 1)
        throw DomainError("factorize_big: argument must be >= 1");

    BigAcc acc;
    BigInt rest = m;

    if (!fits_u64(rest)) {
        auto primes = trial_primes(budget.trial_limit);
        for (std::uint32_t p : *primes) {
            if (p > budget.trial_limit)
                break;
            if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                unsigned e = 0;
                do {
                    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                    ++e;
                } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
                auto& slot = acc.primes[BigInt(static_cast<unsigned long>(p))];
                slot.first += e;
                slot.second = true;
            }
            if (fits_u64(rest))
                break;
        }
    }

    std::uint64_t used = 0;
    split_big(rest, acc, budget.rho_iterations, used);

    BigFactorization out;
    out.entries.reserve(acc.primes.size());
    for (const auto& [p, ec] : acc.primes)
        out.entries.push_back({p, ec.first, ec.second});
    out.cofactor = acc.cofactor;
    return out;
}

} // namespace shiftprod
