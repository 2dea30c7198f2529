#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kostlan/ensemble.hpp"
#include "kostlan/stats.hpp"
#include "support/oracles.hpp"

using namespace kostlan;

TEST_SUITE("ensemble") {

TEST_CASE("dimension closed forms") {
    CHECK(dimension(1, 2) == 3);
    CHECK(dimension(2, 3) == 10);
    for (int n : {1, 7, 100, 4096}) CHECK(dimension(1, n) == static_cast<std::uint64_t>(n) + 1);
    // leading term consistency: d_n / (n^m/m!) -> 1
    CHECK(static_cast<double>(dimension(1, 100000)) / 100000.0 == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(dimension(30, 1000000), std::range_error);
}

TEST_CASE("multi-index order is frozen") {
    // graded colex for m=2, n=2
    const auto t = multi_index_table(2, 2);
    const std::uint32_t expect[18] = {2, 0, 0, 1, 1, 0, 0, 2, 0, 1, 0, 1, 0, 1, 1, 0, 0, 2};
    REQUIRE(t.size() == 18);
    for (int i = 0; i < 18; ++i) CHECK(t[static_cast<std::size_t>(i)] == expect[i]);
}

TEST_CASE("spherical draws sit exactly on the unit sphere") {
    EnsembleSpec spec{1, 16, Measure::spherical, 42};
    for (int t = 0; t < 20; ++t) {
        auto s = sample_coefficients(spec, static_cast<std::uint64_t>(t));
        CHECK(std::abs(s.norm() - 1.0) < 1e-12);
        CHECK(s.coeffs.size() == dimension(1, 16));
    }
}

TEST_CASE("normalized gaussian second moment") {
    EnsembleSpec spec{1, 4, Measure::normalized_gaussian, 314};
    const int draws = 10000;
    std::vector<double> norms2(draws);
    for (int t = 0; t < draws; ++t) {
        auto s = sample_coefficients(spec, static_cast<std::uint64_t>(t));
        double n2 = 0.0;
        for (auto& c : s.coeffs) n2 += std::norm(c);
        norms2[static_cast<std::size_t>(t)] = n2;
    }
    // E sum |a|^2 = 1; Var = 1/d per draw
    const double se = stddev(norms2) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(mean(norms2) - 1.0) <= 3.0 * se);
}

TEST_CASE("determinism in (master_seed, trial_index)") {
    EnsembleSpec spec{2, 5, Measure::spherical, 999};
    auto a = sample_coefficients(spec, 17);
    auto b = sample_coefficients(spec, 17);
    REQUIRE(a.coeffs.size() == b.coeffs.size());
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) CHECK(a.coeffs[i] == b.coeffs[i]);
    auto c = sample_coefficients(spec, 18);
    bool all_same = true;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        if (a.coeffs[i] != c.coeffs[i]) all_same = false;
    CHECK_FALSE(all_same);
}

TEST_CASE("field evaluation closed forms") {
    SUBCASE("n = 0 is the constant a0") {
        EnsembleSpec spec{2, 0, Measure::normalized_gaussian, 5};
        auto s = sample_coefficients(spec, 3);
        RandomStream rs(1, 1);
        auto p = oracles::random_point(2, rs);
        auto fv = evaluate_field(s, p);
        CHECK(std::abs(fv.amplitude - s.coeffs[0]) < 1e-15);
    }
    SUBCASE("chart origin picks out the extreme coefficient times sqrt(d_n)") {
        EnsembleSpec spec{1, 6, Measure::spherical, 8};
        auto s = sample_coefficients(spec, 0);
        auto fv = evaluate_field(s, basis_point(1, 0));
        const double d = static_cast<double>(dimension(1, 6));
        CHECK(std::abs(fv.amplitude - s.coeffs[0] * std::sqrt(d)) < 1e-12);
    }
}

TEST_CASE("evaluator agrees with the naive power-product oracle") {
    RandomStream rs(23, 0);
    for (const auto& [m, n] : std::vector<std::pair<int, int>>{{1, 5}, {1, 16}, {2, 6}, {3, 4}}) {
        EnsembleSpec spec{m, n, Measure::normalized_gaussian, 77};
        auto s = sample_coefficients(spec, 1);
        FieldEvaluator ev(s);
        for (int t = 0; t < 25; ++t) {
            auto p = oracles::random_point(m, rs);
            const Complex fast = ev.amplitude_at_lift(p.lift());
            const Complex slow = oracles::naive_amplitude(s, p.lift());
            CHECK(std::abs(fast - slow) <= 1e-12 * std::max(1.0, std::abs(slow)));
        }
    }
}

TEST_CASE("magnitude is lift-phase invariant") {
    EnsembleSpec spec{2, 7, Measure::spherical, 4};
    auto s = sample_coefficients(spec, 0);
    FieldEvaluator ev(s);
    RandomStream rs(3, 3);
    for (int t = 0; t < 50; ++t) {
        auto p = oracles::random_point(2, rs);
        std::vector<Complex> rotated(p.lift().begin(), p.lift().end());
        const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * rs.uniform());
        for (auto& c : rotated) c *= phase;
        CHECK(std::abs(std::abs(ev.amplitude_at_lift(p.lift())) -
                       std::abs(ev.amplitude_at_lift(rotated))) < 1e-12);
    }
}

TEST_CASE("pointwise variance is 1 in the gaussian ensemble") {
    EnsembleSpec spec{1, 8, Measure::normalized_gaussian, 2718};
    const auto basis = std::make_shared<const MonomialBasis>(1, 8);
    RandomStream rs(31, 0);
    auto p = oracles::random_point(1, rs);
    const int draws = 10000;
    std::vector<double> mags2(draws);
    for (int t = 0; t < draws; ++t) {
        FieldEvaluator ev(basis, sample_coefficients(spec, static_cast<std::uint64_t>(t)));
        mags2[static_cast<std::size_t>(t)] = std::norm(ev.amplitude_at_lift(p.lift()));
    }
    const double se = stddev(mags2) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(mean(mags2) - 1.0) <= 3.0 * se);
}

TEST_CASE("spherical magnitudes are exchangeable across points") {
    EnsembleSpec spec{1, 16, Measure::spherical, 11235};
    const auto basis = std::make_shared<const MonomialBasis>(1, 16);
    RandomStream rs(37, 0);
    auto p1 = oracles::random_point(1, rs);
    auto p2 = oracles::random_point(1, rs);
    const int draws = 10000;
    std::vector<double> a(draws), b(draws);
    for (int t = 0; t < draws; ++t) {
        FieldEvaluator ev(basis, sample_coefficients(spec, static_cast<std::uint64_t>(t)));
        a[static_cast<std::size_t>(t)] = std::abs(ev.amplitude_at_lift(p1.lift()));
        b[static_cast<std::size_t>(t)] = std::abs(ev.amplitude_at_lift(p2.lift()));
    }
    // 1% two-sample KS critical value: 1.628 sqrt(2/N)
    const double critical = 1.628 * std::sqrt(2.0 / draws);
    CHECK(ks_statistic(a, b) < critical);
}

TEST_CASE("sphere_gauss_ratio") {
    CHECK(std::abs(sphere_gauss_ratio(1) - std::sqrt(std::numbers::pi) / 2.0) < 1e-15);
    // independent product recurrence C(d+1) = C(d) (d + 1/2) / sqrt(d(d+1))
    double c = std::sqrt(std::numbers::pi) / 2.0;
    for (std::uint64_t d = 1; d < 1000; ++d) {
        const double dd = static_cast<double>(d);
        c *= (dd + 0.5) / std::sqrt(dd * (dd + 1.0));
        if (d + 1 == 10 || d + 1 == 100 || d + 1 == 1000)
            CHECK(std::abs(sphere_gauss_ratio(d + 1) - c) < 1e-12);
    }
    CHECK(sphere_gauss_ratio(100) > 0.998);
    CHECK(sphere_gauss_ratio(100) < 1.0);
    // asymptote 1 - 1/(8d)
    CHECK(std::abs(sphere_gauss_ratio(100) - (1.0 - 1.0 / 800.0)) < 1e-5);
    CHECK(std::abs(sphere_gauss_ratio(1000000) - 1.0) < 0.2e-6);
    // monotone increasing toward 1
    double prev = 0.0;
    for (std::uint64_t d : {1, 2, 4, 8, 16, 64, 256, 1024, 65536}) {
        const double v = sphere_gauss_ratio(d);
        CHECK(v > prev);
        CHECK(v < 1.0);
        prev = v;
    }
}

}  // TEST_SUITE
