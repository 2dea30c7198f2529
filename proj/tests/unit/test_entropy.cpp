#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kostlan/entropy.hpp"
#include "support/oracles.hpp"

using namespace kostlan;

TEST_SUITE("entropy") {

TEST_CASE("covering model forced to one ball gives a zero integral") {
    const auto res = dudley_integral(1, 256, 128, [](double) { return 0.0; });
    CHECK(res.total == doctest::Approx(0.0));
}

TEST_CASE("dudley agrees with the high-resolution trapezoid oracle") {
    const auto res = dudley_integral(1, 256, 256);
    const double oracle = oracles::trapezoid_dudley(1, 256, 1000000);
    CHECK(std::abs(res.total - oracle) / oracle <= 1e-4);
}

TEST_CASE("dudley over sqrt(log n) is stable in n") {
    for (int m : {1, 2}) {
        double lo = 1e300, hi = 0.0;
        double prev = 0.0;
        for (int n : {64, 256, 1024, 4096}) {
            const double v = dudley_integral(m, n, 256).total;
            CHECK(v > prev);  // strictly increasing in n at fixed m
            prev = v;
            const double ratio = v / std::sqrt(std::log(static_cast<double>(n)));
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK((hi - lo) / hi < 0.10);
    }
}

TEST_CASE("threshold sliver term vanishes relative to sqrt(log n)") {
    double prev = 1e300;
    for (int n : {64, 256, 1024, 4096}) {
        const double ii = dudley_integral(1, n, 128).tail;
        const double scaled = ii / std::sqrt(std::log(static_cast<double>(n)));
        CHECK(scaled < prev);
        prev = scaled;
    }
    CHECK(prev < dudley_integral(1, 64, 128).tail / std::sqrt(std::log(64.0)) / 10.0);
}

TEST_CASE("non-convergent quadrature raises a numeric error") {
    // a discontinuous, oscillating covering model defeats refinement
    int calls = 0;
    auto nasty = [&calls](double) mutable {
        return (calls++ % 7 == 0) ? 1e6 : 0.0;
    };
    CHECK_THROWS_AS(dudley_integral(1, 256, 64, nasty), NumericError);
}

TEST_CASE("sudakov closed-form instances") {
    // m=1, n=256 at the threshold epsilon: about 1.769
    const int n = 256;
    const double eps = std::numbers::sqrt2 * std::sqrt(1.0 - 1.0 / n);
    const double at_threshold = sudakov_at(1, n, eps);
    const double expect = std::sqrt(1.0 - 1.0 / n) *
                          std::sqrt(std::log(n / (2.0 * std::log(static_cast<double>(n)))));
    CHECK(at_threshold == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(at_threshold - 1.769) < 2e-3);

    // sweep maximum dominates any single grid value
    const auto [eps_star, best] = sudakov_sweep(1, n, 256);
    CHECK(best >= at_threshold);
    CHECK(eps_star > 0.0);
    CHECK(eps_star <= eps + 1e-12);

    // m=2 instance: sqrt(2 log(n / (2 log n))) times the threshold factor
    const double at2 = sudakov_at(2, n, eps);
    const double expect2 = std::sqrt(1.0 - 1.0 / n) *
                           std::sqrt(2.0 * std::log(n / (2.0 * std::log(static_cast<double>(n)))));
    CHECK(at2 == doctest::Approx(expect2).epsilon(1e-12));
    CHECK(std::abs(expect2 - 2.501) < 2e-3);
}

TEST_CASE("predicted envelope") {
    SUBCASE("m=1, n=1024 sharp upper closed form") {
        const auto env = predicted_envelope(1, 1024);
        CHECK(env.sharp_upper == doctest::Approx(std::sqrt(6.9315 + 1.9361)).epsilon(1e-3));
        CHECK(std::abs(env.sharp_upper - 2.978) < 1e-3);
        CHECK(std::sqrt(std::log(1024.0)) == doctest::Approx(2.6327).epsilon(1e-4));
    }
    SUBCASE("envelope brackets sqrt(m log n)") {
        for (int m : {1, 2}) {
            for (int n : {64, 256, 1024}) {
                const auto env = predicted_envelope(m, n);
                const double target = std::sqrt(m * std::log(static_cast<double>(n)));
                CHECK(env.sharp_lower <= target);
                CHECK(target <= env.sharp_upper);
                CHECK(env.sudakov_value <= env.dudley_value);
            }
        }
    }
    SUBCASE("sharp_upper / sqrt(m log n) decreases toward 1") {
        double prev = 1e300;
        for (int n : {1000, 10000, 100000, 1000000}) {
            const auto env = predicted_envelope(1, n);
            const double ratio = env.sharp_upper / std::sqrt(std::log(static_cast<double>(n)));
            CHECK(ratio < prev);
            CHECK(ratio > 1.0);
            prev = ratio;
        }
    }
    SUBCASE("n below 3 rejected") {
        CHECK_THROWS_AS(predicted_envelope(1, 2), std::domain_error);
    }
}

TEST_CASE("sudakov and dudley are increasing in n") {
    for (int m : {1, 2}) {
        double prev_s = 0.0;
        for (int n : {64, 256, 1024, 4096}) {
            const auto [eps_star, best] = sudakov_sweep(m, n, 256);
            CHECK(best > prev_s);
            prev_s = best;
        }
    }
}

TEST_CASE("levy tails") {
    CHECK(levy_tail(0.0) == doctest::Approx(1.0));
    CHECK(levy_tail(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    // finite-dimensional form with d - 1 = 2 Lip^2 dominates e^{-r^2}
    for (double r : {0.1, 0.5, 1.0, 2.5}) {
        const double lip = 3.0;
        const double fin = levy_tail_finite(r, 2.0 * lip * lip + 1.0, lip);
        CHECK(fin == doctest::Approx(std::exp(-r * r)).epsilon(1e-12));
        CHECK(fin <= levy_tail(r));
    }
}

}  // TEST_SUITE
