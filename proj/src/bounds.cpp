#include "shiftprod/bounds.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "shiftprod/errors.hpp"
#include "shiftprod/factor.hpp"

namespace shiftprod {
namespace {

constexpr double kGuard = 1e-9; // relative guard band on the analytic side

// Claim "exact <= bound": the bound is shrunk so float edges cannot fake
// a pass; claim "exact >= bound": inflated likewise.
bool holds_upper(double exact, double bound) {
    return exact <= bound * (1.0 - kGuard);
}

bool holds_lower(double exact, double bound) {
    return exact >= bound * (1.0 + kGuard);
}

std::string fmt_params(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : kv) {
        os << (first ? "" : " ") << k << "=";
        if (v == static_cast<double>(static_cast<std::uint64_t>(v)) && v < 1e15)
            os << static_cast<std::uint64_t>(v);
        else
            os << v;
        first = false;
    }
    return os.str();
}

double nlog(std::uint64_t x) { return std::log(static_cast<double>(x)); }

} // namespace

std::pair<double, double> dusart_pi_bounds(std::uint64_t x) {
    if (x < 2)
        throw DomainError("dusart_pi_bounds: x must be >= 2");
    const double lx = nlog(x);
    const double base = static_cast<double>(x) / lx;
    return {base * (1.0 + 0.992 / lx), base * (1.0 + 1.2762 / lx)};
}

std::vector<BoundReport> dusart_check(std::uint64_t x, const SieveOptions& opts) {
    const auto [lower, upper] = dusart_pi_bounds(x);
    const double pi_x = static_cast<double>(count_primes(x, opts));
    const bool applicable = x >= 599;

    BoundReport lo;
    lo.name = "dusart-pi-lower";
    lo.params = fmt_params({{"x", static_cast<double>(x)}});
    lo.analytic = lower;
    lo.exact = pi_x;
    lo.applicable = applicable;
    lo.satisfied = holds_lower(pi_x, lower); // lower <= pi(x)

    BoundReport hi = lo;
    hi.name = "dusart-pi-upper";
    hi.analytic = upper;
    hi.satisfied = holds_upper(pi_x, upper); // pi(x) <= upper
    return {lo, hi};
}

double brun_titchmarsh_bound(std::uint64_t y, std::uint64_t k) {
    if (k < 1)
        throw DomainError("brun_titchmarsh_bound: k must be >= 1");
    if (y <= k)
        throw DomainError("brun_titchmarsh_bound: requires y > k");
    const double phi = static_cast<double>(euler_phi(factorize(k)));
    return 2.0 * static_cast<double>(y) /
           (phi * std::log(static_cast<double>(y) / static_cast<double>(k)));
}

BoundReport brun_titchmarsh_check(std::uint64_t x, std::uint64_t y, std::uint64_t k,
                                  std::uint64_t l, const SieveOptions& opts) {
    const double bound = brun_titchmarsh_bound(y, k);
    const std::uint64_t hi_count = count_primes_ap(x + y, k, l, opts).count;
    const std::uint64_t lo_count = count_primes_ap(x, k, l, opts).count;
    const double exact = static_cast<double>(hi_count - lo_count);

    BoundReport r;
    r.name = "brun-titchmarsh";
    r.params = fmt_params({{"x", static_cast<double>(x)},
                           {"y", static_cast<double>(y)},
                           {"k", static_cast<double>(k)},
                           {"l", static_cast<double>(l)}});
    r.analytic = bound;
    r.exact = exact;
    r.applicable = true; // y > k was already enforced
    r.satisfied = holds_upper(exact, bound);
    return r;
}

BoundReport pi3_lower_check(std::uint64_t x, std::uint64_t l_res, const SieveOptions& opts) {
    if (l_res != 1 && l_res != 2)
        throw DomainError("pi3_lower_check: residue must be 1 or 2");
    if (x < 2)
        throw DomainError("pi3_lower_check: x must be >= 2");
    const double bound = static_cast<double>(x) / (2.0 * nlog(x));
    const double exact = static_cast<double>(count_primes_ap(x, 3, l_res, opts).count);

    BoundReport r;
    r.name = "pi3-lower";
    r.params = fmt_params({{"x", static_cast<double>(x)}, {"l", static_cast<double>(l_res)}});
    r.analytic = bound;
    r.exact = exact;
    r.applicable = x >= 151;
    r.satisfied = holds_lower(exact, bound);
    return r;
}

BoundReport ramare_rumely_check(std::uint64_t x, std::uint64_t k, std::uint64_t l,
                                const SieveOptions& opts) {
    if (k < 1 || std::gcd(k, l) != 1)
        throw DomainError("ramare_rumely_check: residue must be coprime to k");
    const double phi = static_cast<double>(euler_phi(factorize(k)));
    const double center = static_cast<double>(x) / phi;
    const double theta = count_primes_ap(x, k, l, opts).log_sum;

    BoundReport r;
    r.name = "ramare-rumely";
    r.params = fmt_params({{"x", static_cast<double>(x)},
                           {"k", static_cast<double>(k)},
                           {"l", static_cast<double>(l)}});
    r.analytic = 0.023269 * center;
    r.exact = std::abs(theta - center);
    r.applicable = k <= 72 && x >= 10'000'000'000ull;
    r.satisfied = holds_upper(r.exact, r.analytic);
    return r;
}

BoundReport window_lower_check(std::uint64_t n, const SieveOptions& opts) {
    if (n < 2)
        throw DomainError("window_lower_check: n must be >= 2");
    const double bound = 0.4845 * static_cast<double>(n + 1) / nlog(n + 1);
    const double exact = static_cast<double>(window_count(n, opts));

    BoundReport r;
    r.name = "window-lower";
    r.params = fmt_params({{"n", static_cast<double>(n)}});
    r.analytic = bound;
    r.exact = exact;
    r.applicable = n >= 20'000'000'000ull;
    r.satisfied = holds_lower(exact, bound);
    return r;
}

BoundReport window_ap_upper_check(std::uint64_t n, std::uint64_t q, unsigned r_param,
                                  const SieveOptions& opts) {
    if (!is_prime(q))
        throw DomainError("window_ap_upper_check: q must be prime");
    if (n < 2)
        throw DomainError("window_ap_upper_check: n must be >= 2");

    const double x = static_cast<double>(n + 1) / nlog(n + 1);
    double bound;
    bool hypothesis;
    if (q == 3) {
        bound = 0.304 * x;
        hypothesis = true;
    } else {
        bound = x / (0.8696 * (static_cast<double>(r_param) - 1.0));
        hypothesis = 5 <= r_param && r_param <= 11 && q >= r_param;
    }
    const double exact = static_cast<double>(window_count_ap(n, q, opts));

    BoundReport r;
    r.name = "window-ap-upper";
    r.params = fmt_params({{"n", static_cast<double>(n)},
                           {"q", static_cast<double>(q)},
                           {"r", static_cast<double>(r_param)}});
    r.analytic = bound;
    r.exact = exact;
    r.applicable = hypothesis && n >= 20'000'000'000ull;
    r.satisfied = holds_upper(exact, bound);
    return r;
}

std::vector<BoundReport> margin_report(std::uint64_t n, std::uint64_t q1,
                                       std::uint64_t q2, const SieveOptions& opts) {
    if (!is_prime(q1) || !is_prime(q2))
        throw DomainError("margin_report: q1 and q2 must be prime");
    if (q1 <= q2 || q2 < 3)
        throw DomainError("margin_report: requires q1 > q2 >= 3");
    if (n < 2)
        throw DomainError("margin_report: n must be >= 2");

    const double x = static_cast<double>(n + 1) / nlog(n + 1);
    const double lhs = static_cast<double>(window_count_ap(n, q1, opts)) +
                       static_cast<double>(window_count_ap(n, q2, opts)) + 2.0;
    const double mid = 0.419 * x + 2.0;
    const double rhs = 0.4845 * x;
    const bool applicable = n >= 20'000'000'000ull && q1 >= 11;

    BoundReport first;
    first.name = "margin-counts";
    first.params = fmt_params({{"n", static_cast<double>(n)},
                               {"q1", static_cast<double>(q1)},
                               {"q2", static_cast<double>(q2)}});
    first.analytic = mid;
    first.exact = lhs;
    first.applicable = applicable;
    first.satisfied = holds_upper(lhs, mid);

    BoundReport second;
    second.name = "margin-analytic";
    second.params = first.params;
    second.analytic = rhs;
    second.exact = mid;
    second.applicable = applicable;
    second.satisfied = holds_upper(mid, rhs);
    return {first, second};
}

BoundReport window_ap_general_check(std::uint64_t n, std::uint64_t q, double C,
                                    const SieveOptions& opts) {
    if (!is_prime(q) || q % 2 == 0)
        throw DomainError("window_ap_general_check: q must be an odd prime");
    if (C < 0.125)
        throw DomainError("window_ap_general_check: C must be >= 1/8");
    if (n < 2)
        throw DomainError("window_ap_general_check: n must be >= 2");

    const double side = 16.0 * C + 1.0;
    const double bound =
        static_cast<double>(n + 1) / (8.0 * C * nlog(n + 1)) + 6.0;
    const double exact = static_cast<double>(window_count_ap(n, q, opts));

    BoundReport r;
    r.name = "window-ap-general";
    r.params = fmt_params({{"n", static_cast<double>(n)},
                           {"q", static_cast<double>(q)},
                           {"C", C}});
    r.analytic = bound;
    r.exact = exact;
    r.applicable = static_cast<double>(q) >= side &&
                   static_cast<double>(n) >= 4.0 * side * side;
    r.satisfied = holds_upper(exact, bound);
    return r;
}

} // namespace shiftprod
