#include "doctest.h"

#include <cmath>

#include "shiftprod/bounds.hpp"
#include "shiftprod/errors.hpp"

using namespace shiftprod;

TEST_CASE("dusart bracket") {
    const auto [lo, hi] = dusart_pi_bounds(1'000'000);
    CHECK(lo <= 78498.0);
    CHECK(78498.0 <= hi);

    const auto reports = dusart_check(1'000'000);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].applicable);
    CHECK(reports[0].satisfied);
    CHECK(reports[1].satisfied);
    CHECK(reports[0].exact == 78498.0);

    const auto at_599 = dusart_check(599);
    CHECK(at_599[0].applicable);
    CHECK(at_599[0].satisfied);
    CHECK(at_599[1].satisfied);
    CHECK(at_599[0].exact == 109.0);

    const auto small = dusart_check(100);
    CHECK_FALSE(small[0].applicable);
}

TEST_CASE("dusart bounds move monotonically in x") {
    double prev_lo = 0, prev_hi = 0;
    for (std::uint64_t x = 599; x < 599 * 64; x *= 2) {
        const auto [lo, hi] = dusart_pi_bounds(x);
        CHECK(lo > prev_lo);
        CHECK(hi > prev_hi);
        prev_lo = lo;
        prev_hi = hi;
    }
}

TEST_CASE("brun-titchmarsh") {
    CHECK(brun_titchmarsh_bound(100, 1) ==
          doctest::Approx(200.0 / std::log(100.0)).epsilon(1e-12));
    CHECK_THROWS_AS(brun_titchmarsh_bound(30, 30), DomainError);

    const BoundReport r = brun_titchmarsh_check(0, 100, 1, 1);
    CHECK(r.exact == 25.0); // pi(100)
    CHECK(r.satisfied);

    const BoundReport r3 = brun_titchmarsh_check(1'000'000, 100'000, 3, 1);
    CHECK(r3.satisfied);
    CHECK(r3.analytic ==
          doctest::Approx(2.0 * 100'000 / (2.0 * std::log(100'000 / 3.0))).epsilon(1e-12));
}

TEST_CASE("pi(x;3,l) lower bound") {
    for (std::uint64_t l : {1ull, 2ull}) {
        const BoundReport r = pi3_lower_check(151, l);
        CHECK(r.applicable);
        CHECK(r.satisfied);
    }
    CHECK(pi3_lower_check(1'000'000, 2).satisfied);
    CHECK_FALSE(pi3_lower_check(50, 1).applicable);
    CHECK_THROWS_AS(pi3_lower_check(151, 3), DomainError);
}

TEST_CASE("ramare-rumely report below threshold") {
    const BoundReport r = ramare_rumely_check(1'000'000, 15, 2);
    CHECK_FALSE(r.applicable); // x < 1e10
    CHECK(r.exact >= 0.0);
    CHECK(r.analytic == doctest::Approx(0.023269 * 1e6 / 8.0).epsilon(1e-12));
    CHECK_THROWS_AS(ramare_rumely_check(1'000'000, 15, 3), DomainError);
}

TEST_CASE("window lower bound report") {
    const BoundReport r = window_lower_check(16);
    CHECK_FALSE(r.applicable);
    CHECK(r.exact == 3.0);
    CHECK(r.analytic == doctest::Approx(0.4845 * 17.0 / std::log(17.0)).epsilon(1e-12));

    const BoundReport big = window_lower_check(1'000'000);
    CHECK_FALSE(big.applicable);
    CHECK(big.exact == 78498.0 - 41538.0);
    CHECK(big.satisfied); // holds here too, just not claimed
}

TEST_CASE("window progression bounds report") {
    const BoundReport q3 = window_ap_upper_check(100'000, 3, 11);
    CHECK_FALSE(q3.applicable);
    CHECK(q3.exact > 0.0);

    const BoundReport q11 = window_ap_upper_check(100'000, 11, 11);
    CHECK_FALSE(q11.applicable);
    CHECK(q11.satisfied);

    CHECK_THROWS_AS(window_ap_upper_check(100'000, 4, 11), DomainError);
}

TEST_CASE("margin report") {
    const auto reports = margin_report(1'000'000, 11, 3);
    REQUIRE(reports.size() == 2);
    CHECK_FALSE(reports[0].applicable); // below 2e10
    CHECK(reports[1].exact == reports[1].exact); // well-formed
    CHECK_THROWS_AS(margin_report(1'000'000, 3, 3), DomainError);
    CHECK_THROWS_AS(margin_report(1'000'000, 3, 11), DomainError);
}

TEST_CASE("margin analytic inequality holds at scale") {
    // 0.419 x + 2 < 0.4845 x once x = (n+1)/log(n+1) is large
    const auto reports = margin_report(4'000'000, 11, 3);
    CHECK(reports[1].satisfied);
}

TEST_CASE("C-parameterized window bound") {
    const BoundReport ok = window_ap_general_check(4356, 17, 1.0);
    CHECK(ok.applicable);
    CHECK(ok.satisfied);

    CHECK_FALSE(window_ap_general_check(4356, 13, 1.0).applicable); // q < 17
    CHECK_FALSE(window_ap_general_check(1000, 17, 1.0).applicable); // n too small
    CHECK_THROWS_AS(window_ap_general_check(4356, 17, 0.05), DomainError);
}

TEST_CASE("half-window log comparison at the slow threshold") {
    const double n1 = 20'000'000'001.0;
    CHECK(std::log(n1 / 2.0) > 0.97 * std::log(n1));
}
