#include "doctest.h"

#include <random>

#include "shiftprod/errors.hpp"
#include "shiftprod/factor.hpp"

using namespace shiftprod;

TEST_CASE("is_prime basics") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(4));
    CHECK(is_prime(953));
    CHECK(is_prime(10000000259ull));
    CHECK(is_prime(10000002263ull));
    CHECK_FALSE(is_prime(10000000259ull * 3));
    CHECK(is_prime(18446744073709551557ull)); // largest prime below 2^64
    CHECK_FALSE(is_prime(18446744073709551555ull));
}

TEST_CASE("is_prime agrees with trial division") {
    auto trial = [](std::uint64_t m) {
        if (m < 2)
            return false;
        for (std::uint64_t d = 2; d * d <= m; ++d)
            if (m % d == 0)
                return false;
        return true;
    };
    for (std::uint64_t m = 0; m <= 100'000; ++m)
        CHECK(is_prime(m) == trial(m));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t m = rng() % 10'000'000;
        CHECK(is_prime(m) == trial(m));
    }
}

TEST_CASE("factorize examples") {
    CHECK(factorize(1).entries.empty());
    CHECK(factorize(1).value() == 1);

    const Factorization f1025 = factorize(1025);
    REQUIRE(f1025.entries.size() == 2);
    CHECK(f1025.entries[0] == Factorization::Entry{5, 2});
    CHECK(f1025.entries[1] == Factorization::Entry{41, 1});

    const Factorization f2188 = factorize(2188);
    REQUIRE(f2188.entries.size() == 2);
    CHECK(f2188.entries[0] == Factorization::Entry{2, 2});
    CHECK(f2188.entries[1] == Factorization::Entry{547, 1});

    CHECK_THROWS_AS(factorize(0), DomainError);
}

TEST_CASE("factorize reconstructs random inputs with prime entries") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100'000; ++i) {
        // mixed sizes: mostly small, some full width
        std::uint64_t m = rng();
        if (i % 4 != 0)
            m %= 1'000'000'000;
        m = std::max<std::uint64_t>(m, 1);
        const Factorization f = factorize(m);
        CHECK(f.value() == m);
        std::uint64_t prev = 0;
        for (const auto& [p, e] : f.entries) {
            CHECK(p > prev);
            prev = p;
            CHECK(e >= 1);
            CHECK(is_prime(p));
        }
    }
}

TEST_CASE("factorize_big on shifted powers") {
    BigInt m;
    mpz_ui_pow_ui(m.get_mpz_t(), 4, 17);
    m += 1; // 17179869185
    const BigFactorization f = factorize_big(m);
    CHECK(f.complete());
    CHECK(f.value() == m);
    bool has_953 = false;
    for (const auto& e : f.entries) {
        CHECK(e.certified);
        if (e.prime == 953)
            has_953 = e.exponent == 1;
    }
    CHECK(has_953);

    const BigFactorization f2 = factorize_big(BigInt(2));
    REQUIRE(f2.entries.size() == 1);
    CHECK(f2.entries[0].prime == 2);
    CHECK(f2.entries[0].exponent == 1);

    const BigFactorization f3 = factorize_big(BigInt(177148)); // 3^11 + 1
    REQUIRE(f3.entries.size() == 3);
    CHECK(f3.entries[0].prime == 2);
    CHECK(f3.entries[0].exponent == 2);
    CHECK(f3.entries[1].prime == 67);
    CHECK(f3.entries[2].prime == 661);
}

TEST_CASE("factorize_big recovers 32-bit semiprime factors") {
    std::mt19937_64 rng(1234);
    auto random_prime32 = [&] {
        for (;;) {
            const std::uint64_t c = (rng() % (std::uint64_t(1) << 31)) | (std::uint64_t(1) << 30) | 1;
            if (is_prime(c))
                return c;
        }
    };
    for (int i = 0; i < 25; ++i) {
        const std::uint64_t p = random_prime32();
        const std::uint64_t q = random_prime32();
        const BigInt m = BigInt(p) * BigInt(q);
        const BigFactorization f = factorize_big(m);
        CHECK(f.complete());
        CHECK(f.value() == m);
        std::uint64_t count = 0;
        for (const auto& e : f.entries)
            count += e.exponent;
        CHECK(count == (p == q ? 2 : 2));
    }
}

TEST_CASE("factorize_big flags incompleteness under a tiny budget") {
    // product of two ~40-bit primes with no rho budget at all
    const BigInt p("1099511627791"); // prime
    const BigInt q("1099511627803"); // prime
    FactorBudget tiny;
    tiny.trial_limit = 100;
    tiny.rho_iterations = 0;
    const BigFactorization f = factorize_big(p * q, tiny);
    CHECK_FALSE(f.complete());
    CHECK(f.value() == p * q);
}
