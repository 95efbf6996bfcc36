#include "shiftprod/oracle.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "shiftprod/certfile.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/powerful.hpp"

namespace shiftprod {

namespace {

double omega_bits(std::uint64_t ell, std::uint64_t n) {
    if (n < 2)
        return 1.0;
    return static_cast<double>(n) * static_cast<double>(ell) *
           std::log2(static_cast<double>(n));
}

void check_budget(std::uint64_t ell, std::uint64_t n, const OmegaBudget& budget) {
    if (ell < 1)
        throw DomainError("omega: exponent must be >= 1");
    if (n < 1)
        throw DomainError("omega: n must be >= 1");
    if (omega_bits(ell, n) > budget.max_bits)
        throw BudgetError("omega: product of ~" +
                          std::to_string(static_cast<std::uint64_t>(omega_bits(ell, n))) +
                          " bits exceeds the budget");
}

} // namespace

BigInt omega(std::uint64_t ell, std::uint64_t n, const OmegaBudget& budget) {
    check_budget(ell, n, budget);
    BigInt product = 1;
    BigInt term;
    for (std::uint64_t a = 1; a <= n; ++a) {
        mpz_ui_pow_ui(term.get_mpz_t(), a, ell);
        term += 1;
        product *= term;
    }
    return product;
}

BigFactorization omega_factorization(std::uint64_t ell, std::uint64_t n,
                                     const OmegaBudget& budget) {
    check_budget(ell, n, budget);
    // Each a^l + 1 is factored separately: the terms are vastly smaller
    // than the product and a+1 | a^l + 1 keeps them smooth-ish.
    std::map<BigInt, std::pair<unsigned, bool>> merged;
    BigInt cofactor = 1;
    BigInt term;
    for (std::uint64_t a = 1; a <= n; ++a) {
        mpz_ui_pow_ui(term.get_mpz_t(), a, ell);
        term += 1;
        BigFactorization f = factorize_big(term, budget.factor);
        for (const auto& entry : f.entries) {
            auto& slot = merged[entry.prime];
            slot.first += entry.exponent;
            slot.second = entry.certified;
        }
        cofactor *= f.cofactor;
    }
    BigFactorization out;
    out.entries.reserve(merged.size());
    for (const auto& [p, ec] : merged)
        out.entries.push_back({p, ec.first, ec.second});
    out.cofactor = cofactor;
    return out;
}

bool oracle_is_powerful(std::uint64_t ell, std::uint64_t n, const OmegaBudget& budget) {
    return is_powerful(omega_factorization(ell, n, budget));
}

// ---------------------------------------------------------------------------
// prove
// ---------------------------------------------------------------------------

ExponentSpec ExponentSpec::from_ell(std::uint64_t ell) {
    ExponentSpec s;
    s.explicit_ell = ell;
    if (ell % 2 == 0)
        throw DomainError("exponent must be odd");
    for (const auto& [p, e] : factorize(ell).entries)
        s.factors.push_back(p);
    return s;
}

ExponentSpec ExponentSpec::from_factors(std::vector<std::uint64_t> factors) {
    ExponentSpec s;
    s.factors = std::move(factors);
    for (std::size_t i = 0; i < s.factors.size(); ++i) {
        const std::uint64_t q = s.factors[i];
        if (q < 3 || q % 2 == 0 || !is_prime(q))
            throw DomainError("exponent factors must be odd primes");
        if (i && s.factors[i] <= s.factors[i - 1])
            throw DomainError("exponent factors must be ascending and distinct");
    }
    return s;
}

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::NotPowerful:
        return "not-powerful";
    case Outcome::Powerful:
        return "powerful";
    case Outcome::Undecided:
        return "undecided";
    }
    return "?";
}

std::string describe(const Witness& w) {
    struct Visitor {
        std::string operator()(std::monostate) const { return "structural argument"; }
        std::string operator()(const ObstructionWitness& o) const {
            return "obstruction prime p = " + std::to_string(o.p) + " in P(" +
                   std::to_string(o.n) + ")";
        }
        std::string operator()(const ChainWitness& c) const {
            return "chain " + c.chain_id + " covering [" + std::to_string(c.covered.lo) +
                   ", " + std::to_string(c.covered.hi) + "]";
        }
        std::string operator()(const BundleWitness& b) const {
            return "case bundle " + b.bundle_id + ", case \"" + b.case_name + "\"";
        }
        std::string operator()(const FactorWitness& f) const {
            return "direct factorization with prime " + f.unit_prime.get_str() +
                   " appearing exactly once";
        }
    };
    return std::visit(Visitor{}, w);
}

namespace {

struct VerifiedChain {
    const ChainCert* chain = nullptr;
    Interval covered;
    std::size_t width = 0;
};

const std::vector<std::pair<std::string, VerifiedChain>>& verified_bundled_chains() {
    static const auto chains = [] {
        std::vector<std::pair<std::string, VerifiedChain>> out;
        for (const std::string& id : bundled_chain_ids()) {
            const ChainCert& chain = bundled_chain(id);
            ChainResult res = verify_chain(chain);
            if (res.valid() && res.covered)
                out.push_back({id, VerifiedChain{&chain, *res.covered,
                                                 chain.tuples.front().primes.size()}});
        }
        return out;
    }();
    return chains;
}

struct VerifiedBundle {
    const CaseBundle* bundle = nullptr;
    bool valid = false;
};

const VerifiedBundle& verified_bundle() {
    static const VerifiedBundle vb = [] {
        VerifiedBundle out;
        out.bundle = &bundled_cases();
        out.valid = verify_case_bundle(*out.bundle).valid;
        return out;
    }();
    return vb;
}

} // namespace

Verdict prove(const ExponentSpec& ell, std::uint64_t n, const ProveOptions& opts) {
    if (n < 1)
        throw DomainError("prove: n must be >= 1");
    if (ell.explicit_ell && *ell.explicit_ell % 2 == 0)
        throw DomainError("prove: exponent must be odd");
    for (std::uint64_t q : ell.factors)
        if (q < 3 || q % 2 == 0 || !is_prime(q))
            throw DomainError("prove: factors must be odd primes");

    std::ostringstream notes;

    // Route 1: obstruction prime in P(n). Deferred behind the cheap table
    // lookups when the window is too large to sieve comfortably.
    const bool obstruction_cheap = n <= 100'000'000 && n + 1 <= opts.sieve.ceiling;
    auto try_obstruction = [&]() -> std::optional<Verdict> {
        if (n + 1 > opts.sieve.ceiling) {
            notes << "obstruction scan skipped: window beyond sieve ceiling; ";
            return std::nullopt;
        }
        if (auto w = find_obstruction_prime(n, ell.factors, opts.sieve))
            return Verdict{Outcome::NotPowerful, *w,
                           "gcd(p(p-1), l) = 1 for p = " + std::to_string(w->p)};
        notes << "no obstruction prime in P(" << n << "); ";
        return std::nullopt;
    };

    if (obstruction_cheap) {
        if (auto v = try_obstruction())
            return *v;
    }

    // Route 2: bundled chain coverage.
    if (opts.use_bundled_chains) {
        for (const auto& [id, vc] : verified_bundled_chains()) {
            if (vc.width >= ell.factors.size() + 1 && vc.covered.contains(n))
                return Verdict{Outcome::NotPowerful, ChainWitness{id, vc.covered},
                               "n lies in the verified covered interval"};
        }
        notes << "no bundled chain of width >= " << ell.factors.size() + 1
              << " covers n; ";
    }

    // Route 3: bundled small-n case analysis (two-prime budget).
    if (opts.use_bundled_cases && ell.factors.size() <= 2) {
        const VerifiedBundle& vb = verified_bundle();
        if (vb.valid) {
            for (const CaseBlock& block : vb.bundle->cases) {
                if (block.n_lo <= n && n <= block.n_hi)
                    return Verdict{Outcome::NotPowerful,
                                   BundleWitness{vb.bundle->id, block.name},
                                   "verified case analysis covers n"};
            }
            notes << "case bundle does not cover n; ";
        } else {
            notes << "case bundle failed verification; ";
        }
    }

    // Route 4: direct factorization for an explicit exponent.
    if (ell.explicit_ell) {
        const std::uint64_t L = *ell.explicit_ell;
        if (omega_bits(L, n) <= opts.budget.max_bits) {
            BigFactorization f = omega_factorization(L, n, opts.budget);
            const BigFactorization::Entry* witness = nullptr;
            for (const auto& entry : f.entries) {
                if (entry.exponent != 1)
                    continue;
                BigInt g;
                mpz_gcd(g.get_mpz_t(), entry.prime.get_mpz_t(), f.cofactor.get_mpz_t());
                if (g != 1)
                    continue;
                if (!witness || (!witness->certified && entry.certified))
                    witness = &entry;
            }
            if (witness) {
                std::string note = "prime " + witness->prime.get_str() +
                                   " divides the product exactly once";
                if (!witness->certified)
                    note += " (probable prime, above machine width)";
                return Verdict{Outcome::NotPowerful,
                               FactorWitness{f, witness->prime}, note};
            }
            if (f.complete())
                return Verdict{Outcome::Powerful, FactorWitness{f, 0},
                               "every prime exponent is >= 2"};
            notes << "factorization incomplete with no unit-exponent witness; ";
        } else {
            notes << "product exceeds the factorization budget; ";
        }
    }

    // Deferred obstruction scan for large n.
    if (!obstruction_cheap) {
        if (auto v = try_obstruction())
            return *v;
    }

    // n <= 2: the power of 2 in the product is exactly 1 (the terms
    // 1^l + 1 = 2 and 2^l + 1 contribute a single factor 2).
    if (n <= 2)
        return Verdict{Outcome::NotPowerful, std::monostate{},
                       "the product's power of 2 is exactly 2^1 for n <= 2"};

    if (ell.factors.size() > 2)
        notes << "factor budgets above two need chains of width "
              << ell.factors.size() + 1
              << " (see search-chain) or thresholds that are not effective "
                 "(the d-sequence command surfaces the relevant constants); ";

    return Verdict{Outcome::Undecided, std::monostate{}, notes.str()};
}

} // namespace shiftprod
