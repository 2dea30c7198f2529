#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "kostlan/ensemble.hpp"
#include "kostlan/projective.hpp"

namespace kostlan {

// unit_volume: diagonal value d_n (matches the unit-variance field convention);
// classical_cpm: diagonal value (n+m)!/(pi^m n!). The two differ by the constant
// factor m!/pi^m = 1/Vol(CP^m) at every pair of points.
enum class KernelNormalization { unit_volume, classical_cpm };

inline double kernel_prefactor(int m, int n, KernelNormalization norm) {
    if (norm == KernelNormalization::unit_volume)
        return static_cast<double>(dimension(m, n));
    double pref = 1.0;  // (n+m)!/n! = prod_{j=1..m} (n+j)
    for (int j = 1; j <= m; ++j) pref *= static_cast<double>(n + j);
    return pref / std::pow(std::numbers::pi, m);
}

inline double kernel_diagonal(int m, int n, KernelNormalization norm) {
    return kernel_prefactor(m, n, norm);
}

// prefactor * <x, conj y>^n on the given lifts (no re-canonicalization)
inline Complex kernel_exact_lifts(int m, int n, std::span<const Complex> x,
                                  std::span<const Complex> y, KernelNormalization norm) {
    return kernel_prefactor(m, n, norm) *
           detail::cpow_uint(lift_inner(x, y), static_cast<std::uint32_t>(n));
}

inline Complex kernel_exact(int m, int n, const ProjectivePoint& p, const ProjectivePoint& q,
                            KernelNormalization norm) {
    if (p.dim() != m || q.dim() != m)
        throw std::domain_error("kernel_exact: dimension mismatch");
    return kernel_exact_lifts(m, n, p.lift(), q.lift(), norm);
}

// leading diagonal coefficient pi^{-m} n^m
inline double diagonal_leading_term(int m, int n) {
    if (n < 1) throw std::domain_error("diagonal_leading_term: n must be >= 1");
    return std::pow(static_cast<double>(n) / std::numbers::pi, m);
}

// (n+m)!/(n^m n!) = prod (1 + j/n); the 1 + m(m+1)/(2n) + ... correction of the
// diagonal against its leading term
inline double diagonal_prefactor_ratio(int m, int n) {
    double r = 1.0;
    for (int j = 1; j <= m; ++j) r *= 1.0 + static_cast<double>(j) / n;
    return r;
}

// scaled coordinates and fiber angles of the model kernel
struct HeisenbergArgs {
    std::vector<Complex> u, v;
    double theta = 0.0;
    double psi = 0.0;
};

// pi^{-m} exp(i(theta-psi) + i Im(u . conj v) - |u-v|^2 / 2)
inline Complex heisenberg_model(const HeisenbergArgs& args, int m) {
    if (args.u.size() != static_cast<std::size_t>(m) ||
        args.v.size() != static_cast<std::size_t>(m))
        throw std::domain_error("heisenberg_model: argument dimension mismatch");
    Complex udotv(0.0, 0.0);
    double dist2 = 0.0;
    for (int j = 0; j < m; ++j) {
        udotv += args.u[static_cast<std::size_t>(j)] * std::conj(args.v[static_cast<std::size_t>(j)]);
        dist2 += std::norm(args.u[static_cast<std::size_t>(j)] - args.v[static_cast<std::size_t>(j)]);
    }
    const Complex expo(-0.5 * dist2, args.theta - args.psi + udotv.imag());
    return std::exp(expo) / std::pow(std::numbers::pi, m);
}

// Embeds u/sqrt(n), v/sqrt(n) in the affine chart at e_0 (normal coordinates to
// second order for this metric normalization) and measures how far
// n^{-m} Pi_n deviates from the model kernel. Decays like O(1/n) on CP^m,
// inside the O(1/sqrt(n)) envelope of the general scaling asymptotics.
inline double scaling_residual(int m, int n, std::span<const Complex> u,
                               std::span<const Complex> v, double window = 3.0) {
    if (u.size() != static_cast<std::size_t>(m) || v.size() != static_cast<std::size_t>(m))
        throw std::domain_error("scaling_residual: argument dimension mismatch");
    if (n < 1) throw std::domain_error("scaling_residual: n must be >= 1");
    double nu = 0.0, nv = 0.0;
    for (int j = 0; j < m; ++j) {
        nu += std::norm(u[static_cast<std::size_t>(j)]);
        nv += std::norm(v[static_cast<std::size_t>(j)]);
    }
    if (std::sqrt(nu) > window || std::sqrt(nv) > window)
        throw std::domain_error("scaling_residual: coordinates outside configured window");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Complex> xu(static_cast<std::size_t>(m) + 1), xv(static_cast<std::size_t>(m) + 1);
    xu[0] = xv[0] = 1.0;
    double su = 1.0, sv = 1.0;
    for (int j = 0; j < m; ++j) {
        xu[static_cast<std::size_t>(j) + 1] = u[static_cast<std::size_t>(j)] * scale;
        xv[static_cast<std::size_t>(j) + 1] = v[static_cast<std::size_t>(j)] * scale;
        su += std::norm(xu[static_cast<std::size_t>(j) + 1]);
        sv += std::norm(xv[static_cast<std::size_t>(j) + 1]);
    }
    const double inv_su = 1.0 / std::sqrt(su), inv_sv = 1.0 / std::sqrt(sv);
    for (auto& c : xu) c *= inv_su;
    for (auto& c : xv) c *= inv_sv;
    const Complex exact = kernel_exact_lifts(m, n, xu, xv, KernelNormalization::classical_cpm) /
                          std::pow(static_cast<double>(n), m);
    HeisenbergArgs args;
    args.u.assign(u.begin(), u.end());
    args.v.assign(v.begin(), v.end());
    const Complex model = heisenberg_model(args, m);
    return std::abs(exact - model);
}

enum class DecayRegime { gaussian, agmon };

struct DecayParams {
    double eps = 0.1;                  // gaussian exponent slack (1 - eps)/2
    double lambda = 0.5;               // agmon rate
    double gaussian_range_const = 1.0; // gaussian regime valid for r <= C n^{-1/3}
    double additive_slack = 1e-8;      // times n^m, absorbs the O(n^-infty) term
};

// Off-diagonal dominating envelopes for |Pi_n| in the classical normalization.
// gaussian: D_n exp(-(1-eps)/2 n r^2) + slack n^m, valid on r <= C n^{-1/3}.
// agmon:    D_n exp(lambda^2 - (n/2) log(1+lambda^2/n)) exp(-lambda sqrt(n) r);
//           the prefactor is the exact tangency constant of cos^n r against
//           e^{-lambda sqrt(n) r}, so dominance holds on all of [0, pi/2].
inline double decay_envelope(int m, int n, double r, DecayRegime regime,
                             const DecayParams& params = {}) {
    if (r < 0.0) throw std::domain_error("decay_envelope: r must be >= 0");
    if (n < 1) throw std::domain_error("decay_envelope: n must be >= 1");
    const double diag = kernel_diagonal(m, n, KernelNormalization::classical_cpm);
    const double nm = std::pow(static_cast<double>(n), m);
    if (regime == DecayRegime::gaussian) {
        const double rmax = params.gaussian_range_const * std::pow(static_cast<double>(n), -1.0 / 3.0);
        if (r > rmax)
            throw std::domain_error("decay_envelope: r outside the gaussian regime window");
        return diag * std::exp(-0.5 * (1.0 - params.eps) * n * r * r) +
               params.additive_slack * nm;
    }
    const double l2 = params.lambda * params.lambda;
    const double tangency = std::exp(l2 - 0.5 * n * std::log1p(l2 / n));
    return diag * tangency * std::exp(-params.lambda * std::sqrt(static_cast<double>(n)) * r);
}

struct DecaySample {
    double r = 0.0;
    double kernel_abs = 0.0;
    double envelope = 0.0;
};

// |kernel| against the envelope on an r-grid; grid respects the regime window
inline std::vector<DecaySample> decay_sweep(int m, int n, DecayRegime regime,
                                            const DecayParams& params = {},
                                            std::size_t count = 200) {
    const double rmax =
        regime == DecayRegime::gaussian
            ? params.gaussian_range_const * std::pow(static_cast<double>(n), -1.0 / 3.0)
            : std::numbers::pi / 2.0;
    std::vector<DecaySample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r =
            std::min(rmax, rmax * static_cast<double>(i) / static_cast<double>(count - 1));
        // two points at geodesic distance r: lifts (1, 0, ...) and (cos r, sin r, 0, ...)
        std::vector<Complex> x(static_cast<std::size_t>(m) + 1, 0.0),
            y(static_cast<std::size_t>(m) + 1, 0.0);
        x[0] = 1.0;
        y[0] = std::cos(r);
        y[1] = std::sin(r);
        DecaySample s;
        s.r = r;
        s.kernel_abs = std::abs(kernel_exact_lifts(m, n, x, y, KernelNormalization::classical_cpm));
        s.envelope = decay_envelope(m, n, r, regime, params);
        out.push_back(s);
    }
    return out;
}

}  // namespace kostlan
