#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace shiftprod {

inline constexpr std::uint64_t kDefaultSieveCeiling = std::uint64_t(1) << 41;

struct SieveOptions {
    std::uint64_t ceiling = kDefaultSieveCeiling;
    unsigned threads = 0;                       // 0: SHIFTPROD_THREADS env or hardware
    std::uint64_t segment_span = std::uint64_t(1) << 24; // numbers per segment
};

/// Effective worker count for `requested` (resolves 0 via the
/// SHIFTPROD_THREADS environment variable, then hardware concurrency).
unsigned resolve_threads(unsigned requested);

/// Primes in (lo, hi], ascending. Materializes the vector; refuses
/// ranges estimated to hold more than ~10^8 primes.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi,
                                           const SieveOptions& opts = {});

/// Streams primes in (lo, hi] ascending into visit; stop early by
/// returning false. Single-threaded (use the counting entry points for
/// bulk work).
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<bool(std::uint64_t)>& visit,
                    const SieveOptions& opts = {});

/// pi(x).
std::uint64_t count_primes(std::uint64_t x, const SieveOptions& opts = {});

/// One pass, many thresholds: returns pi(x) for each x in xs.
std::vector<std::uint64_t> count_primes_multi(const std::vector<std::uint64_t>& xs,
                                              const SieveOptions& opts = {});

/// pi(x; k, l) together with the Chebyshev sum of log p over the same
/// primes (Kahan-compensated).
struct ApCount {
    std::uint64_t x = 0;
    std::uint64_t modulus = 0;
    std::uint64_t residue = 0;
    std::uint64_t count = 0;
    double log_sum = 0.0;
};
ApCount count_primes_ap(std::uint64_t x, std::uint64_t k, std::uint64_t l,
                        const SieveOptions& opts = {});

/// P(n): primes p with (n+1)/2 < p <= n+1. The lower boundary is the
/// integer test 2p > n+1; no floating point is involved.
struct PrimeWindow {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> primes;
};
PrimeWindow prime_window(std::uint64_t n, const SieveOptions& opts = {});

/// Smallest integer admissible in P(n), i.e. floor((n+1)/2) + 1.
std::uint64_t window_first(std::uint64_t n);

/// |P(n)| without materializing the window.
std::uint64_t window_count(std::uint64_t n, const SieveOptions& opts = {});

/// |P(n; q, 1)|: members of P(n) congruent to 1 mod q.
std::uint64_t window_count_ap(std::uint64_t n, std::uint64_t q,
                              const SieveOptions& opts = {});

} // namespace shiftprod
