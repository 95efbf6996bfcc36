#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shiftprod {

// ---------------------------------------------------------------------------
// Prime tuples and chains
//
// A tuple certificate is an increasing list of primes p_1 < ... < p_w,
// all >= 3, whose shifted values p_i - 1 are pairwise free of common odd
// prime factors. When every l with fewer than w distinct prime factors is
// under attack, such a tuple rules out a powerful product for all n in
// [p_w - 1, 2 p_1 - 2] (each p_i then lies in P(n)).
//
// A chain strings tuples together: consecutive covered intervals overlap
// exactly when p_{i+1,w} < 2 p_{i,1}.
// ---------------------------------------------------------------------------

enum class TupleMode {
    OddCoprime,        // pairwise gcd of odd parts of p_i - 1 equals 1
    SafePrimeDistinct, // every (p_i - 1)/2 prime and all distinct
};

std::string to_string(TupleMode mode);
std::optional<TupleMode> tuple_mode_from_string(const std::string& s);

struct TupleCert {
    std::vector<std::uint64_t> primes; // ascending, all >= 3
    TupleMode mode = TupleMode::OddCoprime;
};

struct ChainCert {
    std::vector<TupleCert> tuples; // uniform width and mode
};

struct Interval {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    bool contains(std::uint64_t n) const { return lo <= n && n <= hi; }
    bool operator==(const Interval&) const = default;
};

struct CertFailure {
    enum class Code {
        TooFewEntries,
        EntryBelowThree,
        NotIncreasing,
        CompositeEntry,
        SharedOddFactor,   // OddCoprime violation between two entries
        HalfNotPrime,      // (p-1)/2 composite in SafePrimeDistinct mode
        HalfNotDistinct,
        WidthMismatch,
        ModeMismatch,
        OverlapViolation,  // p_{i+1,w} >= 2 p_{i,1}
        EmptyCoverage,     // covered interval would be inverted
        BadParameters,     // malformed exact-divisibility certificate
        ValuationMismatch, // p^1 || a^{d1}+1 fails
        DivisibilityHit,   // some excluded b has p | b^e + 1
    };
    Code code;
    std::string detail;
    std::size_t tuple_index = SIZE_MAX; // set for chain-level failures
};

/// nullopt when valid; otherwise the first failing invariant.
/// SafePrimeDistinct tuples are additionally checked for odd-coprimality
/// (the mode implies it; both are verified).
std::optional<CertFailure> verify_tuple(const TupleCert& cert);

/// Interval a single valid tuple covers: [p_w - 1, 2 p_1 - 2].
Interval tuple_interval(const TupleCert& cert);

struct ChainResult {
    std::optional<Interval> covered;     // empty chain: nullopt, still valid
    std::optional<CertFailure> failure;
    bool valid() const { return !failure.has_value(); }
};

/// Verifies every tuple, the uniform width/mode, each overlap
/// p_{i+1,w} < 2 p_{i,1}, and that the combined covered interval
/// [p_{1,w} - 1, 2 p_{s,1} - 2] is not inverted.
ChainResult verify_chain(const ChainCert& chain);

// ---------------------------------------------------------------------------
// Exact-divisibility certificates
//
// Data (p, a, n, d1, E) with p an odd prime, 2 <= a <= n and E a set of
// admissible values of gcd(l, p-1) for the family of exponents l under
// attack. A valid certificate has p^1 || a^{d1} + 1 and p not dividing
// b^e + 1 for any other b in [2, n] and any e in E; for every l in the
// family with d1 | l, a powerful product then forces p | l.
// ---------------------------------------------------------------------------

struct ExactDivCert {
    std::uint64_t p = 0;
    std::uint64_t a = 0;
    std::uint64_t n = 0;
    std::uint64_t d1 = 0;
    std::vector<std::uint64_t> exponents; // the set E; every e divides p-1
    std::string note;                     // describes the family, free text
};

std::optional<CertFailure> verify_exact_div(const ExactDivCert& cert);

// ---------------------------------------------------------------------------
// Case bundles
//
// A bundle is a machine-checkable transcript of a small-n case analysis:
// window memberships, forced-divisor branches, exact-divisibility
// certificates, valuation claims and free-text notes recording the
// symbolic steps that are not re-derived here.
// ---------------------------------------------------------------------------

struct BundleStep {
    enum class Kind {
        WindowMember,   // p in P(n) for all n in [n_lo, n_hi]
        DivisorBranch,  // WindowMember + odd prime factors of p(p-1) == primes
        ExactDiv,       // an ExactDivCert
        Valuation,      // p^k || base^exp + 1
        SquareLift,     // p | a+1, p^2 | a^l + 1 forces `forced` | l; no
                        // other b in [1, n] can contribute a factor p
        Note,           // inert documentation
    };
    Kind kind = Kind::Note;

    std::uint64_t p = 0;
    std::uint64_t n_lo = 0, n_hi = 0;        // WindowMember / DivisorBranch
    std::vector<std::uint64_t> primes;       // DivisorBranch
    ExactDivCert cert;                       // ExactDiv
    std::uint64_t base = 0, exp = 0, k = 0;  // Valuation
    std::uint64_t a = 0, n = 0, forced = 0;  // SquareLift
    std::string text;                        // Note / annotations
};

struct CaseBlock {
    std::string name;
    std::uint64_t n_lo = 0, n_hi = 0; // the n range this case settles
    std::vector<BundleStep> steps;
};

struct CaseBundle {
    std::string id;
    std::vector<CaseBlock> cases;
};

struct StepResult {
    std::string case_name;
    std::string description;
    bool ok = false;
    bool checked = false; // false for inert notes
    std::string detail;
};

struct BundleReport {
    std::vector<StepResult> steps;
    std::size_t checked = 0;
    bool valid = true;
};

BundleReport verify_case_bundle(const CaseBundle& bundle);

// ---------------------------------------------------------------------------
// Chain search
// ---------------------------------------------------------------------------

struct ChainSearchOptions {
    std::uint64_t ceiling = std::uint64_t(1) << 41;
    unsigned backtrack_limit = 8; // consecutive level pops before giving up
};

/// Builds a chain whose covered interval contains [cover_lo, cover_hi],
/// greedily from the low end: at each level the tuple with the largest
/// minimal element among the valid tuples fitting under the current bound
/// is chosen, so the covered interval roughly doubles per tuple. Bounded
/// backtracking on dead ends. A degenerate request (lo > hi) yields an
/// empty chain. Returns nullopt when no chain is found.
std::optional<ChainCert> search_chain(std::size_t width, std::uint64_t cover_lo,
                                      std::uint64_t cover_hi, TupleMode mode,
                                      const ChainSearchOptions& opts = {});

} // namespace shiftprod
