#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "kostlan/errors.hpp"
#include "kostlan/field_metric.hpp"

namespace kostlan {

// sqrt(log N(M, d_n, eps)) under the formula covering model, clamped at 0
inline double sqrt_log_covering(int m, int n, double eps) {
    if (eps >= std::numbers::sqrt2) return 0.0;
    const double L = -std::log1p(-0.5 * eps * eps);
    const double logN = m * std::log(static_cast<double>(n) / (2.0 * L));
    return std::sqrt(std::max(0.0, logN));
}

struct DudleyResult {
    double total = 0.0;
    double head = 0.0;  // integral up to sqrt(2) sqrt(1 - 1/n)
    double tail = 0.0;  // threshold sliver, integrand held at its bracket top
};

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
inline constexpr double gl16_x[8] = {
    0.0950125098376374402, 0.2816035507792589132, 0.4580167776572273863,
    0.6178762444026437484, 0.7554044083550030339, 0.8656312023878317439,
    0.9445750230732325761, 0.9894009349916499326};
inline constexpr double gl16_w[8] = {
    0.1894506104550684963, 0.1826034150449235889, 0.1691565193950025382,
    0.1495959888165767320, 0.1246289712555338720, 0.0951585116824927848,
    0.0622535239386478929, 0.0271524594117540949};

template <typename F>
double gauss16(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i)
        s += gl16_w[i] * (f(c - h * gl16_x[i]) + f(c + h * gl16_x[i]));
    return s * h;
}

}  // namespace detail

// Entropy integral int_0^{sqrt 2} sqrt(log N(M, d_n, eps)) d eps, split at the
// threshold sqrt(2) sqrt(1 - 1/n).
//
// The head integrates in the geodesic variable t defined by
// eps(t) = sqrt(2) sqrt(1 - e^{-n t^2 / 2}), under which the default model's
// integrand is exactly sqrt(-2m log t); the substitution removes the
// log-of-log blowup at eps -> 0. Dyadic panels toward t = 0 absorb the
// remaining sqrt(log(1/t)) endpoint growth.
//
// sqrt_log_cov overrides the covering model (test seam); it receives eps.
inline DudleyResult dudley_integral(
    int m, int n, int quad_points,
    const std::function<double(double)>& sqrt_log_cov = {}) {
    if (quad_points < 64) throw std::domain_error("dudley_integral: quad_points must be >= 64");
    if (n < 3) throw std::domain_error("dudley_integral: n must be >= 3");
    const double nn = static_cast<double>(n);
    const double T = std::sqrt(2.0 * std::log(nn) / nn);
    const double eps_thr = std::numbers::sqrt2 * std::sqrt(1.0 - 1.0 / nn);

    const auto integrand_t = [&](double t) {
        const double one_minus = -std::expm1(-0.5 * nn * t * t);
        const double eps = std::numbers::sqrt2 * std::sqrt(one_minus);
        const double weight = 0.5 * std::numbers::sqrt2 * nn * t *
                              std::exp(-0.5 * nn * t * t) / std::sqrt(one_minus);
        const double f = sqrt_log_cov ? sqrt_log_cov(eps)
                                      : std::sqrt(std::max(0.0, -2.0 * m * std::log(t)));
        return f * weight;
    };

    const auto head_at = [&](int subdivisions) {
        double sum = 0.0;
        double hi = T;
        for (int k = 0; k < 54; ++k) {
            const double lo = hi * 0.5;
            const double step = (hi - lo) / subdivisions;
            for (int s = 0; s < subdivisions; ++s)
                sum += detail::gauss16(integrand_t, lo + s * step, lo + (s + 1) * step);
            hi = lo;
        }
        return sum;
    };

    int sub = std::max(1, quad_points / 64);
    double head = head_at(sub);
    bool converged = false;
    for (int round = 0; round < 5; ++round) {
        sub *= 2;
        const double refined = head_at(sub);
        const double change = std::abs(refined - head) / std::max(1e-300, std::abs(refined));
        head = refined;
        if (change < 1e-6) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericError("dudley_integral: quadrature did not converge at max refinement");

    const double top = sqrt_log_cov ? sqrt_log_cov(eps_thr) : sqrt_log_covering(m, n, eps_thr);
    DudleyResult out;
    out.head = head;
    out.tail = top * (std::numbers::sqrt2 - eps_thr);
    out.total = out.head + out.tail;
    return out;
}

// (eps / sqrt 2) sqrt(log N(M, d_n, eps)) — the complex-process minoration value
inline double sudakov_at(int m, int n, double eps) {
    return eps / std::numbers::sqrt2 * sqrt_log_covering(m, n, eps);
}

// Maximizes the minoration over a log-spaced grid in (0, sqrt(2) sqrt(1-1/n)];
// the threshold point itself is always included.
inline std::pair<double, double> sudakov_sweep(int m, int n, int grid_size) {
    if (grid_size < 16) throw std::domain_error("sudakov_sweep: grid_size must be >= 16");
    if (n < 3) throw std::domain_error("sudakov_sweep: n must be >= 3");
    const double eps_thr =
        std::numbers::sqrt2 * std::sqrt(1.0 - 1.0 / static_cast<double>(n));
    double best_eps = eps_thr;
    double best = sudakov_at(m, n, eps_thr);
    for (int i = 0; i < grid_size; ++i) {
        const double u = static_cast<double>(i) / (grid_size - 1);
        const double eps = eps_thr * std::pow(10.0, -6.0 * (1.0 - u));
        const double val = sudakov_at(m, n, eps);
        if (val > best) {
            best = val;
            best_eps = eps;
        }
    }
    return {best_eps, best};
}

struct BoundEnvelope {
    int m = 1;
    int n = 0;
    double dudley_value = 0.0;
    double sudakov_value = 0.0;
    double sudakov_arg = 0.0;   // epsilon attaining the sweep maximum
    double sharp_upper = 0.0;   // sqrt((m + m(m+1)/2 loglog n / log n) log n)
    double sharp_lower = 0.0;   // sudakov sweep value
};

inline BoundEnvelope predicted_envelope(int m, int n, int quad_points = 256,
                                        int grid_size = 256) {
    if (n < 3) throw std::domain_error("predicted_envelope: n must be >= 3");
    BoundEnvelope env;
    env.m = m;
    env.n = n;
    env.dudley_value = dudley_integral(m, n, quad_points).total;
    const auto [eps_star, bound] = sudakov_sweep(m, n, grid_size);
    env.sudakov_arg = eps_star;
    env.sudakov_value = bound;
    env.sharp_lower = bound;
    const double logn = std::log(static_cast<double>(n));
    const double c2 = m + 0.5 * m * (m + 1) * std::log(logn) / logn;
    env.sharp_upper = std::sqrt(c2 * logn);
    return env;
}

// asymptotic concentration tail for |L - median|
inline double levy_tail(double r) {
    if (r < 0.0) throw std::domain_error("levy_tail: r must be >= 0");
    return std::exp(-0.5 * r * r);
}

// finite-dimensional form exp(-(d-1) r^2 / (2 Lip^2))
inline double levy_tail_finite(double r, double d, double lip) {
    if (r < 0.0) throw std::domain_error("levy_tail_finite: r must be >= 0");
    return std::exp(-(d - 1.0) * r * r / (2.0 * lip * lip));
}

}  // namespace kostlan
