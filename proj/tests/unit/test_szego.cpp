#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kostlan/szego.hpp"
#include "support/oracles.hpp"

using namespace kostlan;

TEST_SUITE("szego") {

TEST_CASE("diagonal closed forms") {
    auto p = basis_point(1, 0);
    // m=1, n=2 classical normalization: 3!/(pi 2!) = 3/pi
    const Complex diag = kernel_exact(1, 2, p, p, KernelNormalization::classical_cpm);
    CHECK(diag.real() == doctest::Approx(3.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(diag.imag() == doctest::Approx(0.0));
    // unit-volume diagonal is d_n
    const Complex diag_uv = kernel_exact(1, 2, p, p, KernelNormalization::unit_volume);
    CHECK(diag_uv.real() == doctest::Approx(3.0).epsilon(1e-15));
    // ratio of normalizations is m!/pi^m (here Vol(CP^1) = pi)
    CHECK(diag_uv.real() / diag.real() == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    // orthogonal lifts annihilate the kernel
    const Complex off = kernel_exact(1, 5, basis_point(1, 0), basis_point(1, 1),
                                     KernelNormalization::classical_cpm);
    CHECK(std::abs(off) == doctest::Approx(0.0));
}

TEST_CASE("diagonal exact for several m and n") {
    for (int m : {1, 2, 3}) {
        auto p = basis_point(m, 0);
        for (int n : {1, 4, 17, 64}) {
            double expect = 1.0;
            for (int j = 1; j <= m; ++j) expect *= static_cast<double>(n + j);
            expect /= std::pow(std::numbers::pi, m);
            const Complex diag = kernel_exact(m, n, p, p, KernelNormalization::classical_cpm);
            CHECK(diag.real() == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("hermitian symmetry and Cauchy-Schwarz") {
    RandomStream rs(41, 0);
    for (int t = 0; t < 10000; ++t) {
        const int m = 1 + static_cast<int>(rs.uniform_below(2));
        auto p = oracles::random_point(m, rs);
        auto q = oracles::random_point(m, rs);
        const Complex kpq = kernel_exact(m, 8, p, q, KernelNormalization::classical_cpm);
        const Complex kqp = kernel_exact(m, 8, q, p, KernelNormalization::classical_cpm);
        CHECK(std::abs(kpq - std::conj(kqp)) < 1e-10);
        const double dp = kernel_exact(m, 8, p, p, KernelNormalization::classical_cpm).real();
        const double dq = kernel_exact(m, 8, q, q, KernelNormalization::classical_cpm).real();
        CHECK(std::norm(kpq) <= dp * dq * (1.0 + 1e-10));
    }
}

TEST_CASE("diagonal_leading_term and correction ratio") {
    CHECK(diagonal_leading_term(1, 10) == doctest::Approx(10.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(diagonal_prefactor_ratio(1, 10) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(diagonal_leading_term(2, 100) ==
          doctest::Approx(1e4 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-15));
    CHECK(diagonal_prefactor_ratio(2, 100) == doctest::Approx(1.0302).epsilon(1e-12));
    // ratio - 1 ~ m(m+1)/(2n)
    for (int m : {1, 2, 3}) {
        const double excess = diagonal_prefactor_ratio(m, 100000) - 1.0;
        CHECK(excess == doctest::Approx(m * (m + 1) / 2.0 / 100000.0).epsilon(1e-3));
    }
}

TEST_CASE("heisenberg model closed forms") {
    HeisenbergArgs args;
    args.u = {Complex(0.3, -0.2)};
    args.v = args.u;
    CHECK(std::abs(heisenberg_model(args, 1) - Complex(1.0 / std::numbers::pi, 0.0)) < 1e-15);

    // real separation: pi^{-1} e^{-t^2/2}
    args.u = {Complex(1.7, 0.0)};
    args.v = {Complex(0.0, 0.0)};
    const Complex val = heisenberg_model(args, 1);
    CHECK(val.real() ==
          doctest::Approx(std::exp(-0.5 * 1.7 * 1.7) / std::numbers::pi).epsilon(1e-14));
    CHECK(val.imag() == doctest::Approx(0.0));

    // swapping arguments conjugates
    HeisenbergArgs fwd, bwd;
    fwd.u = {Complex(0.4, 0.9)};
    fwd.v = {Complex(-0.2, 0.3)};
    fwd.theta = 0.7;
    fwd.psi = -0.1;
    bwd.u = fwd.v;
    bwd.v = fwd.u;
    bwd.theta = fwd.psi;
    bwd.psi = fwd.theta;
    CHECK(std::abs(heisenberg_model(fwd, 1) - std::conj(heisenberg_model(bwd, 1))) < 1e-15);
}

TEST_CASE("scaling residual diagonal case is the prefactor correction") {
    // u = v = 0: residual = pi^{-m} ((n+m)!/(n^m n!) - 1)
    for (int m : {1, 2}) {
        for (int n : {16, 64, 256}) {
            std::vector<Complex> zero(static_cast<std::size_t>(m), Complex(0, 0));
            const double res = scaling_residual(m, n, zero, zero);
            const double expect =
                (diagonal_prefactor_ratio(m, n) - 1.0) / std::pow(std::numbers::pi, m);
            CHECK(res == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("scaling residual symmetry and decay") {
    std::vector<Complex> u = {Complex(0, 1)}, v = {Complex(0, -1)};
    std::vector<Complex> nu = {Complex(0, -1)}, nv = {Complex(0, 1)};
    CHECK(scaling_residual(1, 64, u, v) ==
          doctest::Approx(scaling_residual(1, 64, nu, nv)).epsilon(1e-13));

    // decreasing, and consistent with the O(n^{-1/2}) envelope within factor 2:
    // sqrt(n)-normalized residuals may not grow by more than 2x per step
    std::vector<Complex> a = {Complex(1, 0)}, b = {Complex(0, 0)};
    double prev = -1.0, prev_scaled = -1.0;
    for (int n : {16, 64, 256}) {
        const double res = scaling_residual(1, n, a, b);
        const double scaled = res * std::sqrt(static_cast<double>(n));
        if (prev >= 0.0) {
            CHECK(res < prev);
            CHECK(scaled <= 2.0 * prev_scaled);
        }
        prev = res;
        prev_scaled = scaled;
    }
    CHECK_THROWS_AS(scaling_residual(1, 64, std::vector<Complex>{Complex(4, 0)},
                                     std::vector<Complex>{Complex(0, 0)}),
                    std::domain_error);
}

TEST_CASE("field covariance reproduces the unit-volume kernel over d_n") {
    const int n = 6, draws = 4000;
    EnsembleSpec spec{1, n, Measure::normalized_gaussian, 2027};
    const auto basis = std::make_shared<const MonomialBasis>(1, n);
    RandomStream rs(67, 0);
    for (int pair = 0; pair < 3; ++pair) {
        auto p = oracles::random_point(1, rs);
        auto q = oracles::random_point(1, rs);
        const Complex expect = kernel_exact(1, n, p, q, KernelNormalization::unit_volume) /
                               static_cast<double>(dimension(1, n));
        Complex acc(0, 0);
        double acc2 = 0.0;
        for (int t = 0; t < draws; ++t) {
            FieldEvaluator ev(basis, sample_coefficients(spec, static_cast<std::uint64_t>(t)));
            const Complex w = ev.amplitude_at_lift(p.lift()) *
                              std::conj(ev.amplitude_at_lift(q.lift()));
            acc += w;
            acc2 += std::norm(w);
        }
        const Complex emp = acc / static_cast<double>(draws);
        const double se = std::sqrt((acc2 / draws - std::norm(emp)) / draws);
        CHECK(std::abs(emp - expect) <= 3.0 * se);
    }
}

TEST_CASE("decay envelopes") {
    SUBCASE("gaussian at r = 0 dominates the diagonal") {
        for (int n : {16, 256}) {
            const double env = decay_envelope(1, n, 0.0, DecayRegime::gaussian);
            CHECK(env >= kernel_diagonal(1, n, KernelNormalization::classical_cpm));
        }
    }
    SUBCASE("gaussian closed-form instance at n = 256") {
        const int n = 256;
        const double r = 1.0 / 16.0;  // n^{-1/2}
        const double env = decay_envelope(1, n, r, DecayRegime::gaussian);
        const double diag = kernel_diagonal(1, n, KernelNormalization::classical_cpm);
        // envelope/diagonal ~ e^{-0.45}; kernel/diagonal = cos^256(1/16) ~ e^{-1/2}
        CHECK(env / diag == doctest::Approx(std::exp(-0.45)).epsilon(1e-3));
        const double kernel_ratio = std::pow(std::cos(r), n);
        CHECK(env / diag > kernel_ratio);
    }
    SUBCASE("gaussian regime window enforced") {
        CHECK_THROWS_AS(decay_envelope(1, 1000, 0.5, DecayRegime::gaussian), std::domain_error);
    }
    SUBCASE("envelopes dominate the kernel on sweeps") {
        for (int m : {1, 2}) {
            for (int n : {64, 256, 1024}) {
                for (auto regime : {DecayRegime::gaussian, DecayRegime::agmon}) {
                    const auto sweep = decay_sweep(m, n, regime);
                    for (const auto& s : sweep) CHECK(s.kernel_abs <= s.envelope * (1 + 1e-12));
                }
            }
        }
    }
}

}  // TEST_SUITE
