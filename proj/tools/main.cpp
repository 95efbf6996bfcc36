// shiftprod: certificates, sieve counts and explicit bound checks for
// products of shifted powers (1^l+1)(2^l+1)...(n^l+1).

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "shiftprod/bounds.hpp"
#include "shiftprod/certfile.hpp"
#include "shiftprod/errors.hpp"
#include "shiftprod/oracle.hpp"
#include "shiftprod/powerful.hpp"

using namespace shiftprod;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUndecided = 3;

std::uint64_t to_u64_checked(double v, const std::string& what) {
    if (!(v >= 0) || v != std::floor(v) || v > 9.2e18)
        throw DomainError(what + " must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_prime_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos)
            comma = csv.size();
        out.push_back(std::stoull(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

// "lo:hi:count" -> count log-spaced integers in [lo, hi]
std::vector<std::uint64_t> parse_samples(const std::string& spec) {
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw DomainError("samples must be lo:hi:count");
    const double lo = std::stod(spec.substr(0, c1));
    const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::size_t count = std::stoul(spec.substr(c2 + 1));
    if (lo < 2 || hi < lo || count < 1)
        throw DomainError("bad sample range");
    std::vector<std::uint64_t> xs;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        xs.push_back(to_u64_checked(std::round(std::exp(
                         std::log(lo) + t * (std::log(hi) - std::log(lo)))), "sample"));
    }
    return xs;
}

void print_report_header() {
    std::printf("%-18s %-28s %16s %16s %4s %s\n", "bound", "params", "exact",
                "analytic", "appl", "ok");
}

void print_report(const BoundReport& r) {
    std::printf("%-18s %-28s %16.6f %16.6f %4s %s\n", r.name.c_str(), r.params.c_str(),
                r.exact, r.analytic, r.applicable ? "yes" : "no",
                r.satisfied ? "yes" : "NO");
}

// Collects the exit decision for --assert runs.
struct Asserter {
    bool enabled = false;
    bool violated = false;
    void feed(const BoundReport& r) {
        if (enabled && r.applicable && !r.satisfied)
            violated = true;
    }
};

int cmd_verify(const std::string& path) {
    CertFile file = load_cert_file(path);
    switch (file.kind) {
    case CertFile::Kind::Chain: {
        const ChainCert& chain = std::get<ChainCert>(file.payload);
        ChainResult res = verify_chain(chain);
        for (std::size_t i = 0; i < chain.tuples.size(); ++i) {
            const TupleCert& t = chain.tuples[i];
            std::printf("tuple %2zu: (", i + 1);
            for (std::size_t j = 0; j < t.primes.size(); ++j)
                std::printf("%s%" PRIu64, j ? ", " : "", t.primes[j]);
            const bool bad = res.failure && res.failure->tuple_index == i;
            std::printf(") %s\n", bad ? "FAIL" : "ok");
        }
        if (!res.valid()) {
            std::printf("invalid: %s\n", res.failure->detail.c_str());
            return kExitInvalid;
        }
        if (res.covered)
            std::printf("valid: covered interval [%" PRIu64 ", %" PRIu64 "]\n",
                        res.covered->lo, res.covered->hi);
        else
            std::printf("valid: empty chain, covers nothing\n");
        return kExitOk;
    }
    case CertFile::Kind::ExactDiv: {
        const ExactDivCert& cert = std::get<ExactDivCert>(file.payload);
        std::printf("certificate p=%" PRIu64 " a=%" PRIu64 " n=%" PRIu64 " d1=%" PRIu64
                    " |E|=%zu\n",
                    cert.p, cert.a, cert.n, cert.d1, cert.exponents.size());
        if (auto failure = verify_exact_div(cert)) {
            std::printf("invalid: %s\n", failure->detail.c_str());
            return kExitInvalid;
        }
        std::printf("valid: %" PRIu64 "^1 || %" PRIu64 "^%" PRIu64
                    " + 1 and no other base in [2, %" PRIu64 "] hits\n",
                    cert.p, cert.a, cert.d1, cert.n);
        return kExitOk;
    }
    case CertFile::Kind::CaseBundle: {
        const CaseBundle& bundle = std::get<CaseBundle>(file.payload);
        BundleReport report = verify_case_bundle(bundle);
        for (const StepResult& s : report.steps) {
            if (!s.checked)
                std::printf("  [    ] %s: %s\n", s.case_name.c_str(), s.description.c_str());
            else
                std::printf("  [%s] %s: %s%s%s\n", s.ok ? " ok " : "FAIL",
                            s.case_name.c_str(), s.description.c_str(),
                            s.detail.empty() ? "" : " -- ", s.detail.c_str());
        }
        std::printf("%s: %zu checked steps in %zu cases\n",
                    report.valid ? "valid" : "invalid", report.checked,
                    bundle.cases.size());
        return report.valid ? kExitOk : kExitInvalid;
    }
    }
    return kExitUsage;
}

int cmd_prove(const std::string& factors_csv, std::uint64_t ell, std::uint64_t n,
              const SieveOptions& sieve) {
    ExponentSpec spec = factors_csv.empty()
                            ? ExponentSpec::from_ell(ell)
                            : ExponentSpec::from_factors(parse_prime_list(factors_csv));
    ProveOptions opts;
    opts.sieve = sieve;

    if (spec.explicit_ell)
        std::printf("exponent: l = %" PRIu64 "\n", *spec.explicit_ell);
    std::printf("factor set: {");
    for (std::size_t i = 0; i < spec.factors.size(); ++i)
        std::printf("%s%" PRIu64, i ? ", " : "", spec.factors[i]);
    std::printf("}\nn: %" PRIu64 "\n", n);

    Verdict v = prove(spec, n, opts);
    std::printf("verdict: %s\n", to_string(v.outcome).c_str());
    std::printf("witness: %s\n", describe(v.witness).c_str());
    if (!v.detail.empty())
        std::printf("detail: %s\n", v.detail.c_str());

    switch (v.outcome) {
    case Outcome::NotPowerful:
        return kExitOk;
    case Outcome::Powerful:
        if (spec.factors.size() <= 2)
            std::fprintf(stderr,
                         "BUG: a powerful product with at most two distinct odd prime "
                         "factors contradicts the proven theorem; please report\n");
        return kExitInvalid;
    case Outcome::Undecided:
        return kExitUndecided;
    }
    return kExitUsage;
}

int cmd_search_chain(std::size_t width, double from, double to, const std::string& mode_s,
                     const std::string& out_path, std::uint64_t ceiling) {
    auto mode = tuple_mode_from_string(mode_s);
    if (!mode)
        throw DomainError("unknown mode \"" + mode_s + "\"");
    ChainSearchOptions opts;
    opts.ceiling = ceiling;
    auto chain = search_chain(width, to_u64_checked(from, "--from"),
                              to_u64_checked(to, "--to"), *mode, opts);
    if (!chain) {
        std::printf("no chain found\n");
        return kExitInvalid;
    }
    ChainResult res = verify_chain(*chain);
    if (!res.valid()) {
        std::fprintf(stderr, "internal error: emitted chain fails verification: %s\n",
                     res.failure->detail.c_str());
        return kExitInvalid;
    }
    CertFile file;
    file.kind = CertFile::Kind::Chain;
    file.payload = *chain;
    if (out_path.empty()) {
        std::cout << cert_to_json(file).dump(2) << "\n";
    } else {
        save_cert_file(file, out_path);
        std::printf("wrote %zu tuples to %s\n", chain->tuples.size(), out_path.c_str());
    }
    if (res.covered)
        std::printf("covered interval [%" PRIu64 ", %" PRIu64 "]\n", res.covered->lo,
                    res.covered->hi);
    else
        std::printf("empty chain (degenerate request)\n");
    return kExitOk;
}

int cmd_check_omega(std::uint64_t ell, std::uint64_t n) {
    OmegaBudget budget;
    const BigInt value = omega(ell, n, budget);
    std::printf("omega(%" PRIu64 ", %" PRIu64 ") = %s\n", ell, n, value.get_str().c_str());
    BigFactorization f = omega_factorization(ell, n, budget);
    std::printf("factorization:");
    for (const auto& e : f.entries) {
        std::printf(" %s", e.prime.get_str().c_str());
        if (e.exponent > 1)
            std::printf("^%u", e.exponent);
        if (!e.certified)
            std::printf("(pp)");
    }
    if (!f.complete())
        std::printf(" * C(%s)", f.cofactor.get_str().c_str());
    std::printf("\n");
    if (!f.complete()) {
        std::printf("powerful: unknown (incomplete factorization)\n");
        return kExitUndecided;
    }
    std::printf("powerful: %s\n", is_powerful(f) ? "yes" : "no");
    return kExitOk;
}

int cmd_d_sequence(std::uint64_t r, std::size_t count) {
    for (std::size_t i = 0; const BigInt& d : d_sequence(r, count))
        std::printf("D_%zu = %s\n", ++i, d.get_str().c_str());
    return kExitOk;
}

int cmd_bounds(const std::string& which, const std::string& samples, std::uint64_t n,
               std::uint64_t q, std::uint64_t q1, std::uint64_t q2, std::uint64_t k,
               std::uint64_t l, unsigned r_param, double C, std::size_t count,
               std::uint64_t seed, bool do_assert, const SieveOptions& sieve) {
    static const std::set<std::string> known{
        "dusart", "pi3", "brun-titchmarsh", "window-lower",
        "window-ap", "margin", "window-ap-general", "ramare"};
    if (!known.count(which))
        throw DomainError("unknown bound name \"" + which + "\"");

    Asserter guard{do_assert, false};
    if (n >= 1'000'000'000ull)
        std::fprintf(stderr, "sieving up to %" PRIu64 " with %u threads...\n", n + 1,
                     resolve_threads(sieve.threads));
    print_report_header();

    if (which == "dusart") {
        for (std::uint64_t x : parse_samples(samples.empty() ? "599:1e7:50" : samples))
            for (const BoundReport& r : dusart_check(x, sieve)) {
                print_report(r);
                guard.feed(r);
            }
    } else if (which == "pi3") {
        for (std::uint64_t x : parse_samples(samples.empty() ? "151:1e7:50" : samples))
            for (std::uint64_t res : {std::uint64_t(1), std::uint64_t(2)}) {
                BoundReport r = pi3_lower_check(x, res, sieve);
                print_report(r);
                guard.feed(r);
            }
    } else if (which == "brun-titchmarsh") {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < (count ? count : 100); ++i) {
            const std::uint64_t kk = rng() % 30 + 1;
            const std::uint64_t y = kk + 1 + rng() % 1'000'000;
            const std::uint64_t x = rng() % 10'000'000;
            std::uint64_t res = 1 + rng() % kk;
            while (std::gcd(kk, res % kk) != 1)
                res = 1 + rng() % kk;
            BoundReport r = brun_titchmarsh_check(x, y, kk, res, sieve);
            print_report(r);
            guard.feed(r);
        }
    } else if (which == "window-lower") {
        BoundReport r = window_lower_check(n, sieve);
        print_report(r);
        guard.feed(r);
    } else if (which == "window-ap") {
        BoundReport r = window_ap_upper_check(n, q, r_param, sieve);
        print_report(r);
        guard.feed(r);
    } else if (which == "margin") {
        for (const BoundReport& r : margin_report(n, q1, q2, sieve)) {
            print_report(r);
            guard.feed(r);
        }
    } else if (which == "window-ap-general") {
        BoundReport r = window_ap_general_check(n, q, C, sieve);
        print_report(r);
        guard.feed(r);
    } else if (which == "ramare") {
        BoundReport r = ramare_rumely_check(n, k, l, sieve);
        print_report(r);
        guard.feed(r);
    } else {
        throw DomainError("unknown bound name \"" + which + "\"");
    }
    return guard.violated ? kExitInvalid : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certificates and sieve checks for shifted-power products"};
    app.require_subcommand(1);

    unsigned threads = 0;
    std::uint64_t ceiling = kDefaultSieveCeiling;
    app.add_option("--threads", threads, "worker threads (default: SHIFTPROD_THREADS or all cores)");
    app.add_option("--ceiling", ceiling, "sieve ceiling guard (default 2^41)");

    auto* verify = app.add_subcommand("verify", "verify a certificate file");
    std::string verify_path;
    verify->add_option("path", verify_path, "certificate JSON file")->required();

    auto* prove = app.add_subcommand("prove", "prove the product is not powerful");
    std::string prove_factors;
    std::uint64_t prove_ell = 0, prove_n = 0;
    prove->add_option("--factors", prove_factors, "odd prime factors of l, e.g. 3,17");
    prove->add_option("--ell", prove_ell, "explicit odd exponent l");
    prove->add_option("--n", prove_n, "upper end of the product")->required();

    auto* search = app.add_subcommand("search-chain", "search a tuple chain covering a range");
    std::size_t s_width = 3;
    double s_from = 0, s_to = 0;
    std::string s_mode = "odd-coprime", s_out;
    search->add_option("--width", s_width, "tuple width (default 3)");
    search->add_option("--from", s_from, "cover from")->required();
    search->add_option("--to", s_to, "cover to")->required();
    search->add_option("--mode", s_mode, "odd-coprime | safe-prime");
    search->add_option("--out", s_out, "output certificate file");

    auto* omega_cmd = app.add_subcommand("check-omega", "compute and factor the product");
    std::uint64_t o_ell = 0, o_n = 0;
    omega_cmd->add_option("--ell", o_ell, "exponent l")->required();
    omega_cmd->add_option("--n", o_n, "upper end")->required();

    auto* dseq = app.add_subcommand("d-sequence", "terms of D_1 = 16r+1, D_{i+1} = 16r D_i!! + 1");
    std::uint64_t d_r = 1;
    std::size_t d_count = 1;
    dseq->add_option("--r", d_r, "parameter r")->required();
    dseq->add_option("--count", d_count, "number of terms")->required();

    const auto add_bounds_options = [](CLI::App* cmd, std::string& which, std::string& samples,
                                       double& at, std::uint64_t& q, std::uint64_t& q1,
                                       std::uint64_t& q2, std::uint64_t& k, std::uint64_t& l,
                                       unsigned& r_param, double& C, std::size_t& count,
                                       std::uint64_t& seed, bool& do_assert) {
        cmd->add_option("--which", which, "bound name")->required();
        cmd->add_option("--samples", samples, "lo:hi:count log-spaced sample points");
        cmd->add_option("--at", at, "evaluation point (x or n)");
        cmd->add_option("--n", at, "alias for --at");
        cmd->add_option("--q", q, "window progression prime");
        cmd->add_option("--q1", q1, "larger factor prime");
        cmd->add_option("--q2", q2, "smaller factor prime");
        cmd->add_option("--k", k, "progression modulus");
        cmd->add_option("--l", l, "progression residue");
        cmd->add_option("--r", r_param, "window bound parameter r in [5, 11]");
        cmd->add_option("--C", C, "window bound parameter C >= 1/8");
        cmd->add_option("--count", count, "number of random samples");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_flag("--assert", do_assert, "fail on applicable violations");
    };

    std::string b_which, b_samples;
    double b_at = 0, b_C = 1.0;
    std::uint64_t b_q = 3, b_q1 = 11, b_q2 = 3, b_k = 3, b_l = 1, b_seed = 20240901;
    unsigned b_r = 11;
    std::size_t b_count = 0;
    bool b_assert = false;
    auto* bounds_cmd = app.add_subcommand("bounds", "explicit bounds vs exact sieve counts");
    add_bounds_options(bounds_cmd, b_which, b_samples, b_at, b_q, b_q1, b_q2, b_k, b_l,
                       b_r, b_C, b_count, b_seed, b_assert);

    std::string s2_which, s2_samples;
    double s2_at = 0, s2_C = 1.0;
    std::uint64_t s2_q = 3, s2_q1 = 11, s2_q2 = 3, s2_k = 15, s2_l = 2, s2_seed = 20240901;
    unsigned s2_r = 11;
    std::size_t s2_count = 0;
    bool s2_assert = false;
    auto* slow_cmd = app.add_subcommand("bounds-slow",
                                        "the same checks at the slow thresholds (n >= 1e10)");
    add_bounds_options(slow_cmd, s2_which, s2_samples, s2_at, s2_q, s2_q1, s2_q2, s2_k,
                       s2_l, s2_r, s2_C, s2_count, s2_seed, s2_assert);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    SieveOptions sieve;
    sieve.threads = threads;
    sieve.ceiling = ceiling;

    try {
        if (*verify)
            return cmd_verify(verify_path);
        if (*prove) {
            if (prove_factors.empty() == (prove_ell == 0)) {
                std::fprintf(stderr, "prove: need exactly one of --factors / --ell\n");
                return kExitUsage;
            }
            return cmd_prove(prove_factors, prove_ell, prove_n, sieve);
        }
        if (*search)
            return cmd_search_chain(s_width, s_from, s_to, s_mode, s_out, ceiling);
        if (*omega_cmd)
            return cmd_check_omega(o_ell, o_n);
        if (*dseq)
            return cmd_d_sequence(d_r, d_count);
        if (*bounds_cmd)
            return cmd_bounds(b_which, b_samples, to_u64_checked(b_at, "--at"), b_q, b_q1,
                              b_q2, b_k, b_l, b_r, b_C, b_count, b_seed, b_assert, sieve);
        if (*slow_cmd)
            return cmd_bounds(s2_which, s2_samples, to_u64_checked(s2_at, "--at"), s2_q,
                              s2_q1, s2_q2, s2_k, s2_l, s2_r, s2_C, s2_count, s2_seed,
                              s2_assert, sieve);
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const RangeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
