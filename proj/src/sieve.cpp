#include "shiftprod/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <numeric>
#include <thread>

#include "shiftprod/errors.hpp"
#include "shiftprod/factor.hpp"

namespace shiftprod {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && (static_cast<unsigned __int128>(r) * r) > n)
        --r;
    while ((static_cast<unsigned __int128>(r + 1) * (r + 1)) <= n)
        ++r;
    return r;
}

// Odd base primes up to at least `limit`, grown on demand and shared.
std::shared_ptr<const std::vector<std::uint32_t>> odd_base_primes(std::uint64_t limit) {
    static std::mutex mu;
    static std::shared_ptr<const std::vector<std::uint32_t>> cache;
    static std::uint64_t cached_limit = 0;

    std::scoped_lock lock(mu);
    if (!cache || limit > cached_limit) {
        const std::uint64_t top = std::max<std::uint64_t>(limit, 1 << 16);
        std::vector<char> composite(top + 1, 0);
        auto primes = std::make_shared<std::vector<std::uint32_t>>();
        for (std::uint64_t p = 3; p <= top; p += 2) {
            if (composite[p])
                continue;
            primes->push_back(static_cast<std::uint32_t>(p));
            for (std::uint64_t q = p * p; q <= top; q += 2 * p)
                composite[q] = 1;
        }
        cache = std::move(primes);
        cached_limit = top;
    }
    return cache;
}

struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void merge(const Kahan& other) {
        add(other.sum);
        add(other.carry);
    }
};

// Streams odd primes in (lo, hi] ascending through fn (return false to
// stop). Marking works on an odd-only bitset per segment.
template <class Fn>
void stream_odd_primes(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_span,
                       const std::vector<std::uint32_t>& base, Fn&& fn) {
    if (hi < 3)
        return;
    std::uint64_t from = std::max<std::uint64_t>(lo + 1, 3);
    if (from % 2 == 0)
        ++from;
    if (from > hi)
        return;

    segment_span = std::max<std::uint64_t>(segment_span, 1 << 16);
    std::vector<std::uint64_t> words;

    for (std::uint64_t seg_lo = from; seg_lo <= hi;) {
        const std::uint64_t seg_hi = std::min(hi, seg_lo + (segment_span - 1));
        const std::uint64_t n_odds = (seg_hi - seg_lo) / 2 + 1;
        words.assign((n_odds + 63) / 64, 0);

        for (std::uint32_t p32 : base) {
            const std::uint64_t p = p32;
            if (static_cast<unsigned __int128>(p) * p > seg_hi)
                break;
            std::uint64_t start = ((seg_lo + p - 1) / p) * p;
            if (start < p * p)
                start = p * p;
            if (start % 2 == 0)
                start += p;
            if (start > seg_hi)
                continue;
            for (std::uint64_t idx = (start - seg_lo) / 2; idx < n_odds; idx += p)
                words[idx >> 6] |= std::uint64_t(1) << (idx & 63);
        }

        const std::size_t nwords = words.size();
        for (std::size_t w = 0; w < nwords; ++w) {
            std::uint64_t bits = ~words[w];
            if (w == nwords - 1 && (n_odds & 63))
                bits &= (std::uint64_t(1) << (n_odds & 63)) - 1;
            while (bits) {
                const unsigned b = std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint64_t p = seg_lo + 2 * (64 * w + b);
                if (!fn(p))
                    return;
            }
        }

        if (seg_hi >= hi)
            break;
        seg_lo = seg_hi + (seg_hi % 2 == 0 ? 1 : 2);
    }
}

// Fast path: number of odd primes in (lo, hi] by popcount.
std::uint64_t count_odd_primes_seq(std::uint64_t lo, std::uint64_t hi,
                                   std::uint64_t segment_span,
                                   const std::vector<std::uint32_t>& base) {
    if (hi < 3)
        return 0;
    std::uint64_t from = std::max<std::uint64_t>(lo + 1, 3);
    if (from % 2 == 0)
        ++from;
    if (from > hi)
        return 0;

    segment_span = std::max<std::uint64_t>(segment_span, 1 << 16);
    std::vector<std::uint64_t> words;
    std::uint64_t total = 0;

    for (std::uint64_t seg_lo = from; seg_lo <= hi;) {
        const std::uint64_t seg_hi = std::min(hi, seg_lo + (segment_span - 1));
        const std::uint64_t n_odds = (seg_hi - seg_lo) / 2 + 1;
        words.assign((n_odds + 63) / 64, 0);

        for (std::uint32_t p32 : base) {
            const std::uint64_t p = p32;
            if (static_cast<unsigned __int128>(p) * p > seg_hi)
                break;
            std::uint64_t start = ((seg_lo + p - 1) / p) * p;
            if (start < p * p)
                start = p * p;
            if (start % 2 == 0)
                start += p;
            if (start > seg_hi)
                continue;
            for (std::uint64_t idx = (start - seg_lo) / 2; idx < n_odds; idx += p)
                words[idx >> 6] |= std::uint64_t(1) << (idx & 63);
        }

        // Force tail bits beyond n_odds to 1 so the popcount is exact.
        std::uint64_t marked = 0;
        const std::size_t nwords = words.size();
        if (n_odds & 63)
            words[nwords - 1] |= ~((std::uint64_t(1) << (n_odds & 63)) - 1);
        for (std::size_t w = 0; w < nwords; ++w)
            marked += static_cast<std::uint64_t>(std::popcount(words[w]));
        total += 64 * nwords - marked;
        if (seg_hi >= hi)
            break;
        seg_lo = seg_hi + (seg_hi % 2 == 0 ? 1 : 2);
    }
    return total;
}

void check_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    if (lo > hi)
        throw DomainError("sieve: range lower bound exceeds upper bound");
    if (hi > opts.ceiling)
        throw RangeError("sieve: range end " + std::to_string(hi) +
                         " exceeds ceiling " + std::to_string(opts.ceiling));
}

// Runs work(chunk_index, chunk_lo, chunk_hi) over a fixed chunk grid of
// (lo, hi]; grid does not depend on the thread count, so per-chunk
// results merge deterministically.
void run_chunked(std::uint64_t lo, std::uint64_t hi, unsigned threads,
                 std::uint64_t chunk_span, std::size_t& nchunks_out,
                 const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& work) {
    if (lo >= hi) {
        nchunks_out = 0;
        return;
    }
    const std::uint64_t total = hi - lo;
    const std::size_t nchunks = static_cast<std::size_t>((total + chunk_span - 1) / chunk_span);
    nchunks_out = nchunks;

    auto chunk_bounds = [&](std::size_t i) {
        const std::uint64_t clo = lo + chunk_span * i;
        const std::uint64_t chi = std::min(hi, clo + chunk_span);
        return std::pair{clo, chi};
    };

    if (threads <= 1 || nchunks == 1) {
        for (std::size_t i = 0; i < nchunks; ++i) {
            auto [clo, chi] = chunk_bounds(i);
            work(i, clo, chi);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    auto runner = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= nchunks)
                return;
            auto [clo, chi] = chunk_bounds(i);
            work(i, clo, chi);
        }
    };
    std::vector<std::thread> pool;
    const unsigned use = std::min<std::size_t>(threads, nchunks);
    pool.reserve(use);
    for (unsigned t = 0; t < use; ++t)
        pool.emplace_back(runner);
    for (auto& th : pool)
        th.join();
}

std::uint64_t chunk_span_for(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    const std::uint64_t span = std::max<std::uint64_t>(opts.segment_span, 1 << 16);
    const std::uint64_t total = hi > lo ? hi - lo : 0;
    // Aim for a few chunks per thread without shrinking below a segment.
    return std::max<std::uint64_t>(span, total / 256 + 1);
}

// Primes in (lo, hi] including 2 when it falls inside.
std::uint64_t count_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& opts) {
    check_range(lo, hi, opts);
    if (lo >= hi)
        return 0;
    std::uint64_t result = (lo < 2 && hi >= 2) ? 1 : 0;
    auto base = odd_base_primes(isqrt(hi));
    const unsigned threads = resolve_threads(opts.threads);
    const std::uint64_t cspan = chunk_span_for(lo, hi, opts);
    std::size_t nchunks = 0;
    std::vector<std::uint64_t> counts;
    counts.resize(static_cast<std::size_t>((hi - lo + cspan - 1) / cspan), 0);
    run_chunked(lo, hi, threads, cspan, nchunks,
                [&](std::size_t i, std::uint64_t clo, std::uint64_t chi) {
                    counts[i] = count_odd_primes_seq(clo, chi, opts.segment_span, *base);
                });
    for (std::uint64_t c : counts)
        result += c;
    return result;
}

struct ApChunk {
    std::uint64_t count = 0;
    Kahan theta;
};

} // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested)
        return requested;
    if (const char* env = std::getenv("SHIFTPROD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi,
                                           const SieveOptions& opts) {
    check_range(lo, hi, opts);
    if (lo >= hi)
        return {};
    const double est = hi / std::max(1.0, std::log(static_cast<double>(hi)) - 1.1) -
                       (lo > 2 ? lo / std::max(1.0, std::log(static_cast<double>(lo)) - 1.1) : 0.0);
    if (est > 1.2e8)
        throw RangeError("primes_in_range: range holds too many primes to materialize; "
                         "use the counting interfaces");
    std::vector<std::uint64_t> out;
    if (lo < 2 && hi >= 2)
        out.push_back(2);
    auto base = odd_base_primes(isqrt(hi));
    stream_odd_primes(lo, hi, opts.segment_span, *base, [&](std::uint64_t p) {
        out.push_back(p);
        return true;
    });
    return out;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<bool(std::uint64_t)>& visit,
                    const SieveOptions& opts) {
    check_range(lo, hi, opts);
    if (lo >= hi)
        return;
    if (lo < 2 && hi >= 2 && !visit(2))
        return;
    auto base = odd_base_primes(isqrt(hi));
    stream_odd_primes(lo, hi, opts.segment_span, *base,
                      [&](std::uint64_t p) { return visit(p); });
}

std::uint64_t count_primes(std::uint64_t x, const SieveOptions& opts) {
    if (x < 2)
        return 0;
    return count_range(1, x, opts);
}

std::vector<std::uint64_t> count_primes_multi(const std::vector<std::uint64_t>& xs,
                                              const SieveOptions& opts) {
    std::vector<std::uint64_t> out(xs.size(), 0);
    if (xs.empty())
        return out;
    // One pass over consecutive intervals of the sorted thresholds.
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::uint64_t prev = 1, acc = 0;
    for (std::size_t idx : order) {
        const std::uint64_t x = xs[idx];
        if (x >= 2 && x > prev) {
            acc += count_range(prev, x, opts);
            prev = x;
        }
        out[idx] = (x < 2) ? 0 : acc;
    }
    return out;
}

ApCount count_primes_ap(std::uint64_t x, std::uint64_t k, std::uint64_t l,
                        const SieveOptions& opts) {
    if (k == 0)
        throw DomainError("count_primes_ap: modulus must be >= 1");
    if (l == 0)
        throw DomainError("count_primes_ap: residue must be a positive integer");
    l %= k;
    if (std::gcd(k, l) != 1)
        throw DomainError("count_primes_ap: residue must be coprime to the modulus");
    check_range(0, x, opts);

    ApCount result;
    result.x = x;
    result.modulus = k;
    result.residue = l;
    if (x < 2)
        return result;

    Kahan total;
    std::uint64_t count = 0;
    if (2 % k == l && x >= 2) {
        ++count;
        total.add(std::log(2.0));
    }

    auto base = odd_base_primes(isqrt(x));
    const unsigned threads = resolve_threads(opts.threads);
    const std::uint64_t cspan = chunk_span_for(1, x, opts);
    std::vector<ApChunk> chunks(static_cast<std::size_t>((x - 1 + cspan - 1) / cspan));
    std::size_t nchunks = 0;
    run_chunked(1, x, threads, cspan, nchunks,
                [&](std::size_t i, std::uint64_t clo, std::uint64_t chi) {
                    ApChunk& slot = chunks[i];
                    stream_odd_primes(clo, chi, opts.segment_span, *base,
                                      [&](std::uint64_t p) {
                                          if (p % k == l) {
                                              ++slot.count;
                                              slot.theta.add(std::log(static_cast<double>(p)));
                                          }
                                          return true;
                                      });
                });
    for (const ApChunk& c : chunks) {
        count += c.count;
        total.merge(c.theta);
    }
    result.count = count;
    result.log_sum = total.sum;
    return result;
}

std::uint64_t window_first(std::uint64_t n) {
    // Integer form of p > (n+1)/2, i.e. 2p > n+1.
    return (n + 1) / 2 + 1;
}

PrimeWindow prime_window(std::uint64_t n, const SieveOptions& opts) {
    if (n < 1)
        throw DomainError("prime_window: n must be >= 1");
    check_range(0, n + 1, opts);
    PrimeWindow w;
    w.n = n;
    w.primes = primes_in_range(window_first(n) - 1, n + 1, opts);
    return w;
}

std::uint64_t window_count(std::uint64_t n, const SieveOptions& opts) {
    if (n < 1)
        throw DomainError("window_count: n must be >= 1");
    return count_range(window_first(n) - 1, n + 1, opts);
}

std::uint64_t window_count_ap(std::uint64_t n, std::uint64_t q, const SieveOptions& opts) {
    if (n < 1)
        throw DomainError("window_count_ap: n must be >= 1");
    if (!is_prime(q))
        throw DomainError("window_count_ap: q must be prime");
    check_range(0, n + 1, opts);

    const std::uint64_t lo = window_first(n) - 1;
    const std::uint64_t hi = n + 1;
    if (lo >= hi)
        return 0;

    auto base = odd_base_primes(isqrt(hi));
    const unsigned threads = resolve_threads(opts.threads);
    const std::uint64_t cspan = chunk_span_for(lo, hi, opts);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>((hi - lo + cspan - 1) / cspan), 0);
    std::size_t nchunks = 0;
    run_chunked(lo, hi, threads, cspan, nchunks,
                [&](std::size_t i, std::uint64_t clo, std::uint64_t chi) {
                    std::uint64_t c = 0;
                    stream_odd_primes(clo, chi, opts.segment_span, *base,
                                      [&](std::uint64_t p) {
                                          if (p % q == 1)
                                              ++c;
                                          return true;
                                      });
                    counts[i] = c;
                });
    std::uint64_t total = 0;
    for (std::uint64_t c : counts)
        total += c;
    // p = 2 is never 1 mod a prime q >= 2, so the odd stream suffices.
    return total;
}

} // namespace shiftprod
