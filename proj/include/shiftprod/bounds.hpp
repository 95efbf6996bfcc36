#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftprod/sieve.hpp"

namespace shiftprod {

/// Comparison of one explicit analytic bound against an exact sieve
/// count. `applicable` reflects the bound's stated hypothesis (e.g.
/// x >= 599); below the threshold the comparison is reported but not
/// claimed. `satisfied` uses a 1e-9 relative guard band on the analytic
/// side, tightened in the direction that makes the check stricter.
struct BoundReport {
    std::string name;
    std::string params;
    double analytic = 0.0;
    double exact = 0.0;
    bool applicable = false;
    bool satisfied = false;
};

/// Bracket x/log x (1 + 0.992/log x) <= pi(x) <= x/log x (1 + 1.2762/log x),
/// stated for x >= 599. Returns {lower, upper} values only.
std::pair<double, double> dusart_pi_bounds(std::uint64_t x);

/// Both sides of the bracket against a sieved pi(x).
std::vector<BoundReport> dusart_check(std::uint64_t x, const SieveOptions& opts = {});

/// Brun-Titchmarsh (Montgomery-Vaughan form): the bound value
/// 2y / (phi(k) log(y/k)); requires y > k (DomainError otherwise).
double brun_titchmarsh_bound(std::uint64_t y, std::uint64_t k);

/// pi(x+y; k, l) - pi(x; k, l) against the bound above.
BoundReport brun_titchmarsh_check(std::uint64_t x, std::uint64_t y, std::uint64_t k,
                                  std::uint64_t l, const SieveOptions& opts = {});

/// pi(x; 3, l) > x / (2 log x), stated for x >= 151. l_res in {1, 2}.
BoundReport pi3_lower_check(std::uint64_t x, std::uint64_t l_res,
                            const SieveOptions& opts = {});

/// |theta(x; k, l) - x/phi(k)| <= 0.023269 x/phi(k), stated for
/// 1 <= k <= 72 and x >= 10^10. Exact side from the sieved theta.
BoundReport ramare_rumely_check(std::uint64_t x, std::uint64_t k, std::uint64_t l,
                                const SieveOptions& opts = {});

/// |P(n)| > 0.4845 (n+1)/log(n+1), stated for n >= 2*10^10.
BoundReport window_lower_check(std::uint64_t n, const SieveOptions& opts = {});

/// Window counts in progressions, stated for n >= 2*10^10:
///   q = 3:            |P(n; 3, 1)| < 0.304 (n+1)/log(n+1)
///   q >= r, 5<=r<=11: |P(n; q, 1)| <= (n+1)/(0.8696 (r-1) log(n+1))
BoundReport window_ap_upper_check(std::uint64_t n, std::uint64_t q, unsigned r,
                                  const SieveOptions& opts = {});

/// The two-prime margin that forces an obstruction prime for exponents
/// with factor pair {q1, q2}, q1 > q2 >= 3:
///   |P(n;q1,1)| + |P(n;q2,1)| + 2 < 0.419 (n+1)/log(n+1) + 2
///                                 < 0.4845 (n+1)/log(n+1)
/// Returns one report per inequality; guaranteed applicable for
/// n >= 2*10^10 and q1 >= 11.
std::vector<BoundReport> margin_report(std::uint64_t n, std::uint64_t q1,
                                       std::uint64_t q2, const SieveOptions& opts = {});

/// C-parameterized window bound: for an odd prime q >= 16C+1 >= 3 and
/// n >= 4(16C+1)^2,  |P(n; q, 1)| <= (n+1)/(8C log(n+1)) + 6.
BoundReport window_ap_general_check(std::uint64_t n, std::uint64_t q, double C,
                                    const SieveOptions& opts = {});

} // namespace shiftprod
