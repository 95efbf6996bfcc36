#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftprod/certs.hpp"
#include "shiftprod/factor.hpp"
#include "shiftprod/obstruction.hpp"

namespace shiftprod {

struct OmegaBudget {
    double max_bits = 1e6;      // refuse products larger than this
    FactorBudget factor;        // per-term factorization effort
};

/// The exact product (1^l + 1)(2^l + 1) ... (n^l + 1).
/// Throws BudgetError when n * l * log2(n) exceeds max_bits.
BigInt omega(std::uint64_t ell, std::uint64_t n, const OmegaBudget& budget = {});

/// Factorization of the product, built by factoring each a^l + 1
/// separately and merging exponents (the terms are far smaller than the
/// product). Incomplete term factorizations leave a cofactor > 1.
BigFactorization omega_factorization(std::uint64_t ell, std::uint64_t n,
                                     const OmegaBudget& budget = {});

/// Ground truth: factors the product and applies the powerful predicate.
/// Throws IncompleteFactorizationError when any term resists the budget.
bool oracle_is_powerful(std::uint64_t ell, std::uint64_t n,
                        const OmegaBudget& budget = {});

// ---------------------------------------------------------------------------
// prove: decide "the product over [1, n] is not powerful" with a witness
// ---------------------------------------------------------------------------

/// Exponent specification: an explicit odd l, or a set of odd primes such
/// that every exponent under attack has its prime factors inside the set.
struct ExponentSpec {
    std::optional<std::uint64_t> explicit_ell;
    std::vector<std::uint64_t> factors; // distinct odd primes, ascending

    static ExponentSpec from_ell(std::uint64_t ell);
    static ExponentSpec from_factors(std::vector<std::uint64_t> factors);
};

enum class Outcome { NotPowerful, Powerful, Undecided };

struct ChainWitness {
    std::string chain_id;
    Interval covered;
};

struct BundleWitness {
    std::string bundle_id;
    std::string case_name;
};

/// A (possibly partial) factorization of the product exposing a prime
/// with exponent exactly 1 whose square cannot hide in the cofactor.
struct FactorWitness {
    BigFactorization fact;
    BigInt unit_prime;
};

using Witness = std::variant<std::monostate, ObstructionWitness, ChainWitness,
                             BundleWitness, FactorWitness>;

struct Verdict {
    Outcome outcome = Outcome::Undecided;
    Witness witness;
    std::string detail;
};

struct ProveOptions {
    SieveOptions sieve;
    OmegaBudget budget;
    bool use_bundled_chains = true;
    bool use_bundled_cases = true;
};

/// Attempts, in order: (1) an obstruction prime in P(n); (2) coverage of n
/// by a bundled verified chain of sufficient width; (3) the bundled
/// small-n case analysis (n <= 21, at most two distinct prime factors);
/// (4) direct factorization when an explicit l fits the budget. For
/// n <= 2 the exact power of 2 in the product is 1 and the verdict is
/// immediate. Returns the first witness found, otherwise Undecided with
/// the reasons each route failed.
Verdict prove(const ExponentSpec& ell, std::uint64_t n, const ProveOptions& opts = {});

std::string to_string(Outcome o);

/// One-line human description of a witness.
std::string describe(const Witness& w);

} // namespace shiftprod
