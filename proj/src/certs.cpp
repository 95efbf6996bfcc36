#include "shiftprod/certs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "shiftprod/arith.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/factor.hpp"
#include "shiftprod/sieve.hpp"

namespace shiftprod {

std::string to_string(TupleMode mode) {
    return mode == TupleMode::OddCoprime ? "odd-coprime" : "safe-prime-distinct";
}

std::optional<TupleMode> tuple_mode_from_string(const std::string& s) {
    if (s == "odd-coprime" || s == "odd_coprime")
        return TupleMode::OddCoprime;
    if (s == "safe-prime-distinct" || s == "safe-prime" || s == "safe_prime_distinct")
        return TupleMode::SafePrimeDistinct;
    return std::nullopt;
}

namespace {

std::string fmt_tuple(const TupleCert& t) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < t.primes.size(); ++i)
        os << (i ? ", " : "") << t.primes[i];
    os << ")";
    return os.str();
}

// p | b^e + 1 for prime p, via b^e = -1 (mod p).
bool divides_shifted_power(std::uint64_t p, std::uint64_t b, std::uint64_t e) {
    return mod_pow(b % p, e, p) == p - 1;
}

constexpr double kMaxCertBits = 1 << 22;

} // namespace

std::optional<CertFailure> verify_tuple(const TupleCert& cert) {
    using Code = CertFailure::Code;
    const auto& ps = cert.primes;
    if (ps.size() < 2)
        return CertFailure{Code::TooFewEntries, "tuple needs at least two primes"};
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i] < 3)
            return CertFailure{Code::EntryBelowThree,
                               "entry " + std::to_string(ps[i]) + " is below 3"};
        if (i && ps[i] <= ps[i - 1])
            return CertFailure{Code::NotIncreasing,
                               "entries not strictly increasing at " + std::to_string(ps[i])};
        if (!is_prime(ps[i]))
            return CertFailure{Code::CompositeEntry,
                               std::to_string(ps[i]) + " is not prime"};
    }

    if (cert.mode == TupleMode::SafePrimeDistinct) {
        std::vector<std::uint64_t> halves;
        for (std::uint64_t p : ps) {
            const std::uint64_t h = (p - 1) / 2;
            if (!is_prime(h))
                return CertFailure{Code::HalfNotPrime,
                                   "(" + std::to_string(p) + "-1)/2 = " +
                                       std::to_string(h) + " is not prime"};
            halves.push_back(h);
        }
        std::sort(halves.begin(), halves.end());
        if (std::adjacent_find(halves.begin(), halves.end()) != halves.end())
            return CertFailure{Code::HalfNotDistinct, "shifted halves are not distinct"};
    }

    // Odd-coprimality is the defining property in OddCoprime mode and an
    // implied one in SafePrimeDistinct mode; check it in both.
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const std::uint64_t g =
                std::gcd(odd_part(ps[i] - 1), odd_part(ps[j] - 1));
            if (g != 1)
                return CertFailure{Code::SharedOddFactor,
                                   std::to_string(ps[i]) + "-1 and " +
                                       std::to_string(ps[j]) +
                                       "-1 share the odd factor " + std::to_string(g)};
        }
    }
    return std::nullopt;
}

Interval tuple_interval(const TupleCert& cert) {
    return Interval{cert.primes.back() - 1, 2 * cert.primes.front() - 2};
}

ChainResult verify_chain(const ChainCert& chain) {
    using Code = CertFailure::Code;
    ChainResult result;
    if (chain.tuples.empty())
        return result; // valid, covers nothing

    const std::size_t width = chain.tuples.front().primes.size();
    const TupleMode mode = chain.tuples.front().mode;
    for (std::size_t i = 0; i < chain.tuples.size(); ++i) {
        const TupleCert& t = chain.tuples[i];
        if (t.primes.size() != width) {
            result.failure = CertFailure{Code::WidthMismatch,
                                         "tuple " + fmt_tuple(t) + " has width " +
                                             std::to_string(t.primes.size()) +
                                             ", expected " + std::to_string(width),
                                         i};
            return result;
        }
        if (t.mode != mode) {
            result.failure = CertFailure{Code::ModeMismatch,
                                         "tuple " + fmt_tuple(t) + " mode differs", i};
            return result;
        }
        if (auto failure = verify_tuple(t)) {
            failure->tuple_index = i;
            result.failure = failure;
            return result;
        }
    }
    for (std::size_t i = 0; i + 1 < chain.tuples.size(); ++i) {
        const std::uint64_t upper_top = chain.tuples[i + 1].primes.back();
        const std::uint64_t lower_min = chain.tuples[i].primes.front();
        if (upper_top >= 2 * lower_min) {
            result.failure =
                CertFailure{Code::OverlapViolation,
                            "tuples " + std::to_string(i + 1) + " and " +
                                std::to_string(i + 2) + ": " + std::to_string(upper_top) +
                                " >= 2*" + std::to_string(lower_min),
                            i};
            return result;
        }
    }
    const Interval covered{chain.tuples.front().primes.back() - 1,
                           2 * chain.tuples.back().primes.front() - 2};
    if (covered.lo > covered.hi) {
        result.failure = CertFailure{Code::EmptyCoverage,
                                     "covered interval [" + std::to_string(covered.lo) +
                                         ", " + std::to_string(covered.hi) +
                                         "] is inverted"};
        return result;
    }
    result.covered = covered;
    return result;
}

std::optional<CertFailure> verify_exact_div(const ExactDivCert& cert) {
    using Code = CertFailure::Code;
    if (cert.p < 3 || cert.p % 2 == 0)
        return CertFailure{Code::BadParameters, "p must be an odd prime"};
    if (!is_prime(cert.p))
        return CertFailure{Code::CompositeEntry,
                           "p = " + std::to_string(cert.p) + " is not prime"};
    if (cert.a < 2 || cert.a > cert.n)
        return CertFailure{Code::BadParameters, "a must satisfy 2 <= a <= n"};
    if (cert.d1 < 1)
        return CertFailure{Code::BadParameters, "d1 must be >= 1"};
    if (cert.exponents.empty())
        return CertFailure{Code::BadParameters, "exponent set is empty"};
    for (std::uint64_t e : cert.exponents) {
        if (e < 1 || (cert.p - 1) % e != 0)
            return CertFailure{Code::BadParameters,
                               "exponent " + std::to_string(e) +
                                   " does not divide p-1 = " + std::to_string(cert.p - 1)};
    }
    if (static_cast<double>(cert.d1) * std::log2(static_cast<double>(cert.a)) > kMaxCertBits)
        return CertFailure{Code::BadParameters, "a^d1 is too large to check"};

    BigInt shifted;
    mpz_ui_pow_ui(shifted.get_mpz_t(), cert.a, cert.d1);
    shifted += 1;
    const unsigned v = exact_valuation(BigInt(static_cast<unsigned long>(cert.p)), shifted);
    if (v != 1)
        return CertFailure{Code::ValuationMismatch,
                           "valuation of p in a^d1+1 is " + std::to_string(v) +
                               ", expected exactly 1"};

    for (std::uint64_t b = 2; b <= cert.n; ++b) {
        if (b == cert.a)
            continue;
        for (std::uint64_t e : cert.exponents) {
            if (divides_shifted_power(cert.p, b, e))
                return CertFailure{Code::DivisibilityHit,
                                   std::to_string(cert.p) + " divides " +
                                       std::to_string(b) + "^" + std::to_string(e) +
                                       " + 1"};
        }
    }
    return std::nullopt;
}

namespace {

bool window_member_range(std::uint64_t p, std::uint64_t n_lo, std::uint64_t n_hi,
                         std::string& why) {
    if (n_lo < 1 || n_lo > n_hi) {
        why = "bad n range";
        return false;
    }
    if (!is_prime(p)) {
        why = std::to_string(p) + " is not prime";
        return false;
    }
    // p <= n+1 is hardest at n_lo; 2p > n+1 is hardest at n_hi.
    if (p > n_lo + 1) {
        why = std::to_string(p) + " > n+1 at n = " + std::to_string(n_lo);
        return false;
    }
    if (2 * p <= n_hi + 1) {
        why = "2*" + std::to_string(p) + " <= n+1 at n = " + std::to_string(n_hi);
        return false;
    }
    return true;
}

StepResult run_step(const std::string& case_name, const BundleStep& step) {
    StepResult r;
    r.case_name = case_name;
    std::ostringstream desc;
    switch (step.kind) {
    case BundleStep::Kind::Note:
        desc << "note: " << step.text;
        r.ok = true;
        r.checked = false;
        break;

    case BundleStep::Kind::WindowMember: {
        desc << step.p << " in P(n) for " << step.n_lo << " <= n <= " << step.n_hi;
        std::string why;
        r.checked = true;
        r.ok = window_member_range(step.p, step.n_lo, step.n_hi, why);
        r.detail = why;
        break;
    }

    case BundleStep::Kind::DivisorBranch: {
        desc << step.p << " in P(n) for " << step.n_lo << " <= n <= " << step.n_hi
             << "; odd prime support of p(p-1) = {";
        for (std::size_t i = 0; i < step.primes.size(); ++i)
            desc << (i ? "," : "") << step.primes[i];
        desc << "}";
        r.checked = true;
        std::string why;
        if (!window_member_range(step.p, step.n_lo, step.n_hi, why)) {
            r.ok = false;
            r.detail = why;
            break;
        }
        std::vector<std::uint64_t> support;
        support.push_back(step.p); // p itself is odd here
        for (const auto& [q, e] : factorize(step.p - 1).entries)
            if (q != 2)
                support.push_back(q);
        std::sort(support.begin(), support.end());
        std::vector<std::uint64_t> expected = step.primes;
        std::sort(expected.begin(), expected.end());
        r.ok = support == expected;
        if (!r.ok)
            r.detail = "odd prime support of p(p-1) differs from the declared set";
        break;
    }

    case BundleStep::Kind::ExactDiv: {
        const ExactDivCert& c = step.cert;
        desc << "cert p=" << c.p << " a=" << c.a << " n=" << c.n << " d1=" << c.d1
             << " E={";
        for (std::size_t i = 0; i < c.exponents.size(); ++i)
            desc << (i ? "," : "") << c.exponents[i];
        desc << "}";
        r.checked = true;
        if (auto failure = verify_exact_div(c)) {
            r.ok = false;
            r.detail = failure->detail;
        } else {
            r.ok = true;
        }
        break;
    }

    case BundleStep::Kind::Valuation: {
        desc << step.p << "^" << step.k << " || " << step.base << "^" << step.exp
             << " + 1";
        r.checked = true;
        if (step.p < 2 || !is_prime(step.p)) {
            r.ok = false;
            r.detail = "p is not prime";
            break;
        }
        if (static_cast<double>(step.exp) *
                std::log2(static_cast<double>(std::max<std::uint64_t>(step.base, 2))) >
            kMaxCertBits) {
            r.ok = false;
            r.detail = "base^exp too large to check";
            break;
        }
        BigInt value;
        mpz_ui_pow_ui(value.get_mpz_t(), step.base, step.exp);
        value += 1;
        const unsigned v =
            exact_valuation(BigInt(static_cast<unsigned long>(step.p)), value);
        r.ok = (v == step.k);
        if (!r.ok)
            r.detail = "valuation is " + std::to_string(v);
        break;
    }

    case BundleStep::Kind::SquareLift: {
        desc << step.p << " | " << step.a << "+1; " << step.p << "^2 | " << step.a
             << "^l + 1 forces " << step.forced << " | l (n = " << step.n << ")";
        r.checked = true;
        const std::uint64_t p = step.p;
        if (p < 3 || !is_prime(p)) {
            r.ok = false;
            r.detail = "p must be an odd prime";
            break;
        }
        if (step.a < 2 || step.a > step.n || step.forced < 1) {
            r.ok = false;
            r.detail = "bad parameters";
            break;
        }
        if ((step.a + 1) % p != 0) {
            r.ok = false;
            r.detail = "p does not divide a+1";
            break;
        }
        // No other b can contribute a factor p to the product for odd
        // exponents: either p | b, or the order of b mod p admits no odd
        // solution of b^e = -1 (order not 2 mod 4).
        bool clean = true;
        for (std::uint64_t b = 1; b <= step.n && clean; ++b) {
            if (b == step.a || b % p == 0)
                continue;
            const std::uint64_t ord = multiplicative_order(b % p, p);
            if (ord % 4 == 2) {
                r.detail = "b = " + std::to_string(b) +
                           " can also contribute a factor " + std::to_string(p);
                clean = false;
            }
        }
        if (!clean) {
            r.ok = false;
            break;
        }
        // Solutions of a^l = -1 (mod p^2) form l = m/2 (mod m) for even
        // order m; the forced divisor must divide both, so that every
        // admissible l (odd included) is a multiple of it.
        const std::uint64_t psq = p * p;
        const std::uint64_t m = multiplicative_order(step.a % psq, psq);
        if (m % 2 != 0) {
            r.ok = true;
            r.detail = "p^2 never divides a^l+1; the contradiction is immediate";
            break;
        }
        const std::uint64_t half = m / 2;
        if (mod_pow(step.a % psq, half, psq) != psq - 1) {
            r.ok = true;
            r.detail = "p^2 never divides a^l+1; the contradiction is immediate";
            break;
        }
        if (half % 2 == 0) {
            // every solution l = half + t*m is even; no odd l qualifies
            r.ok = true;
            r.detail = "no odd exponent reaches p^2";
            break;
        }
        r.ok = (half % step.forced == 0) && (m % step.forced == 0);
        if (!r.ok)
            r.detail = "forced divisor does not divide the solution class (" +
                       std::to_string(half) + " mod " + std::to_string(m) + ")";
        break;
    }
    }
    r.description = desc.str();
    return r;
}

} // namespace

BundleReport verify_case_bundle(const CaseBundle& bundle) {
    BundleReport report;
    for (const CaseBlock& block : bundle.cases) {
        for (const BundleStep& step : block.steps) {
            StepResult r = run_step(block.name, step);
            if (r.checked) {
                ++report.checked;
                report.valid = report.valid && r.ok;
            }
            report.steps.push_back(std::move(r));
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Chain search
// ---------------------------------------------------------------------------

namespace {

struct WindowPrimes {
    std::vector<std::uint64_t> primes; // eligible, ascending
    std::vector<std::uint64_t> odd;    // odd parts of p-1
};

WindowPrimes eligible_window(std::uint64_t bound, TupleMode mode,
                             const ChainSearchOptions& opts) {
    WindowPrimes w;
    const std::uint64_t p1_min = std::max<std::uint64_t>(3, (bound + 3) / 2);
    const std::uint64_t top = bound + 1;
    if (p1_min > top)
        return w;
    SieveOptions sopts;
    sopts.ceiling = opts.ceiling + 2;
    for (std::uint64_t p : primes_in_range(p1_min - 1, top, sopts)) {
        if (p < 3)
            continue;
        if (mode == TupleMode::SafePrimeDistinct && !is_prime((p - 1) / 2))
            continue;
        w.primes.push_back(p);
        w.odd.push_back(odd_part(p - 1));
    }
    return w;
}

bool complete_tuple(const WindowPrimes& w, std::vector<std::size_t>& picked,
                    std::size_t from, std::size_t need) {
    if (need == 0)
        return true;
    for (std::size_t i = from; i + need <= w.primes.size(); ++i) {
        bool ok = true;
        for (std::size_t j : picked) {
            if (std::gcd(w.odd[i], w.odd[j]) != 1) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        picked.push_back(i);
        if (complete_tuple(w, picked, i + 1, need - 1))
            return true;
        picked.pop_back();
    }
    return false;
}

struct SearchLevel {
    std::uint64_t bound = 0;
    WindowPrimes window;
    std::size_t next_p1 = 0; // offset from the top candidate, increasing
};

} // namespace

std::optional<ChainCert> search_chain(std::size_t width, std::uint64_t cover_lo,
                                      std::uint64_t cover_hi, TupleMode mode,
                                      const ChainSearchOptions& opts) {
    if (width < 2)
        throw DomainError("search_chain: width must be >= 2");
    if (cover_lo > cover_hi)
        return ChainCert{}; // degenerate request: empty chain covers it
    if (cover_hi + 1 > opts.ceiling)
        throw RangeError("search_chain: cover_hi exceeds the sieve ceiling");

    std::vector<SearchLevel> levels;
    std::vector<TupleCert> chain;
    unsigned consecutive_pops = 0;

    auto make_level = [&](std::uint64_t bound) {
        SearchLevel lvl;
        lvl.bound = bound;
        lvl.window = eligible_window(bound, mode, opts);
        return lvl;
    };

    levels.push_back(make_level(cover_lo));

    while (true) {
        SearchLevel& lvl = levels.back();
        const std::size_t n = lvl.window.primes.size();
        bool placed = false;

        while (!placed && n >= width && lvl.next_p1 <= n - width) {
            // Candidates by descending minimal element.
            const std::size_t i = (n - width) - lvl.next_p1;
            ++lvl.next_p1;
            std::vector<std::size_t> picked{i};
            if (!complete_tuple(lvl.window, picked, i + 1, width - 1))
                continue;
            TupleCert t;
            t.mode = mode;
            for (std::size_t idx : picked)
                t.primes.push_back(lvl.window.primes[idx]);
            chain.push_back(std::move(t));
            placed = true;
        }

        if (!placed) {
            // Dead end: back up one level and advance its candidate.
            levels.pop_back();
            if (!chain.empty())
                chain.pop_back();
            if (levels.empty())
                return std::nullopt;
            if (++consecutive_pops > opts.backtrack_limit)
                return std::nullopt;
            continue;
        }

        consecutive_pops = 0;
        const std::uint64_t new_bound = 2 * chain.back().primes.front() - 1;
        if (new_bound > cover_hi)
            return ChainCert{std::move(chain)};
        levels.push_back(make_level(new_bound));
    }
}

} // namespace shiftprod
