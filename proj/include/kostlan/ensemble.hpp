#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "kostlan/multi_index.hpp"
#include "kostlan/projective.hpp"
#include "kostlan/rng.hpp"

namespace kostlan {

enum class Measure { spherical, normalized_gaussian };

inline std::string_view measure_name(Measure m) {
    return m == Measure::spherical ? "spherical" : "normalized_gaussian";
}

inline Measure measure_from_name(std::string_view s) {
    if (s == "spherical") return Measure::spherical;
    if (s == "normalized_gaussian") return Measure::normalized_gaussian;
    throw std::domain_error("unknown measure: " + std::string(s));
}

// (m, n, measure, master_seed) fully determines the random-section distribution
// and every sampled trial.
struct EnsembleSpec {
    int m = 1;
    int n = 0;
    Measure measure = Measure::spherical;
    std::uint64_t master_seed = 0;
};

// dim H^0(CP^m, O(n)) = C(n+m, m)
inline std::uint64_t dimension(int m, int n) {
    if (m < 1) throw std::domain_error("dimension: m must be >= 1");
    if (n < 0) throw std::domain_error("dimension: n must be >= 0");
    return binomial_checked(static_cast<std::uint64_t>(n) + m, m);
}

// Orthonormal monomial basis data for degree-n sections: exponent table in the
// frozen graded-colex order, the weights sqrt(d_n * n!/(alpha!)), and one
// Horner-ready index permutation per affine pivot.
//
// With these weights sum_i w_i^2 |x^alpha_i|^2 = d_n on unit lifts, so the
// sampled field has pointwise variance exactly 1 in both ensembles.
class MonomialBasis {
public:
    MonomialBasis(int m, int n) : m_(m), n_(n), d_(dimension(m, n)) {
        table_ = multi_index_table(m, n);
        const std::size_t k = static_cast<std::size_t>(m) + 1;
        weights_.resize(d_);
        const double log_d = std::log(static_cast<double>(d_));
        for (std::size_t i = 0; i < d_; ++i) {
            const auto alpha = exponents(i);
            weights_[i] = std::exp(0.5 * (log_d + log_multinomial(n, alpha)));
        }
        // descending colex on the non-pivot exponents = nested Horner order
        pivot_order_.resize(k);
        for (std::size_t p = 0; p < k; ++p) {
            auto& ord = pivot_order_[p];
            ord.resize(d_);
            std::iota(ord.begin(), ord.end(), 0u);
            std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
                const std::uint32_t* ra = table_.data() + a * k;
                const std::uint32_t* rb = table_.data() + b * k;
                for (std::size_t j = k; j-- > 0;) {
                    if (j == p) continue;
                    if (ra[j] != rb[j]) return ra[j] > rb[j];
                }
                return false;
            });
        }
    }

    int m() const { return m_; }
    int n() const { return n_; }
    std::size_t size() const { return d_; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const std::uint32_t> exponents(std::size_t i) const {
        const std::size_t k = static_cast<std::size_t>(m_) + 1;
        return {table_.data() + i * k, k};
    }
    std::span<const std::uint32_t> pivot_order(std::size_t p) const { return pivot_order_[p]; }

private:
    int m_, n_;
    std::size_t d_;
    std::vector<std::uint32_t> table_;
    std::vector<double> weights_;
    std::vector<std::vector<std::uint32_t>> pivot_order_;
};

// The d_n coefficients of one sampled section in the frozen basis order.
struct SectionCoeffs {
    EnsembleSpec spec;
    std::uint64_t trial_seed = 0;
    std::vector<Complex> coeffs;

    double norm() const {
        double s = 0.0;
        for (const Complex& c : coeffs) s += std::norm(c);
        return std::sqrt(s);
    }
};

inline constexpr std::uint64_t trial_stream_tag = 0x7214A1;

// Coefficients are i.i.d. centered complex Gaussians with E|a|^2 = 1/d_n
// (normalized Gaussian), or such a draw renormalized to the unit sphere
// (spherical). Deterministic in (master_seed, trial_index).
inline SectionCoeffs sample_coefficients(const EnsembleSpec& spec, std::uint64_t trial_index) {
    const std::uint64_t d = dimension(spec.m, spec.n);
    SectionCoeffs s;
    s.spec = spec;
    s.trial_seed = mix_seed(spec.master_seed, trial_index, trial_stream_tag);
    RandomStream rs(s.trial_seed);
    s.coeffs.resize(d);
    const double var = 1.0 / static_cast<double>(d);
    for (auto& c : s.coeffs) c = rs.complex_gaussian(var);
    if (spec.measure == Measure::spherical) {
        double norm2 = 0.0;
        for (const Complex& c : s.coeffs) norm2 += std::norm(c);
        const double inv = 1.0 / std::sqrt(norm2);
        for (Complex& c : s.coeffs) c *= inv;
    }
    return s;
}

// equivariant lift value at the canonical unit lift, and |s|_{h^n}
struct FieldValue {
    Complex amplitude;
    double magnitude = 0.0;
};

namespace detail {

inline Complex cpow_uint(Complex base, std::uint32_t k) {
    Complex r(1.0, 0.0);
    while (k) {
        if (k & 1u) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

// Nested Horner over the descending-colex coefficient block; consumes
// C(cap+vars, vars) coefficients starting at `it`.
inline Complex horner_block(const Complex*& it, const Complex* t, int vars, int cap) {
    if (vars == 0) return *it++;
    const Complex tv = t[vars - 1];
    Complex acc = horner_block(it, t, vars - 1, 0);
    for (int k = cap - 1; k >= 0; --k) {
        acc *= tv;
        acc += horner_block(it, t, vars - 1, cap - k);
    }
    return acc;
}

}  // namespace detail

// Evaluates one section at arbitrary unit lifts. Construction precomputes the
// weighted coefficients in every pivot's Horner order; evaluation then costs
// d_n multiply-adds. All intermediates stay bounded: the pivot is the
// largest-modulus coordinate, so |t_j| <= 1 throughout.
class FieldEvaluator {
public:
    FieldEvaluator(std::shared_ptr<const MonomialBasis> basis, const SectionCoeffs& s)
        : basis_(std::move(basis)) {
        if (basis_->m() != s.spec.m || basis_->n() != s.spec.n)
            throw std::domain_error("FieldEvaluator: basis/spec mismatch");
        if (s.coeffs.size() != basis_->size())
            throw std::domain_error("FieldEvaluator: coefficient count mismatch");
        const std::size_t k = static_cast<std::size_t>(basis_->m()) + 1;
        scaled_.resize(k);
        for (std::size_t p = 0; p < k; ++p) {
            const auto ord = basis_->pivot_order(p);
            scaled_[p].resize(basis_->size());
            for (std::size_t i = 0; i < basis_->size(); ++i)
                scaled_[p][i] = s.coeffs[ord[i]] * basis_->weight(ord[i]);
        }
    }

    explicit FieldEvaluator(const SectionCoeffs& s)
        : FieldEvaluator(std::make_shared<MonomialBasis>(s.spec.m, s.spec.n), s) {}

    int m() const { return basis_->m(); }
    int n() const { return basis_->n(); }
    const MonomialBasis& basis() const { return *basis_; }

    Complex amplitude_at_lift(std::span<const Complex> lift) const {
        const int m = basis_->m();
        std::size_t p = 0;
        double best = std::norm(lift[0]);
        for (std::size_t j = 1; j <= static_cast<std::size_t>(m); ++j) {
            const double aj = std::norm(lift[j]);
            if (aj > best) {
                best = aj;
                p = j;
            }
        }
        Complex tbuf[8];
        const Complex inv_pivot = 1.0 / lift[p];
        std::size_t v = 0;
        for (std::size_t j = 0; j <= static_cast<std::size_t>(m); ++j)
            if (j != p) tbuf[v++] = lift[j] * inv_pivot;
        const Complex* it = scaled_[p].data();
        const Complex poly = detail::horner_block(it, tbuf, m, basis_->n());
        return detail::cpow_uint(lift[p], static_cast<std::uint32_t>(basis_->n())) * poly;
    }

    FieldValue operator()(const ProjectivePoint& point) const {
        if (point.dim() != basis_->m())
            throw std::domain_error("evaluate_field: dimension mismatch");
        FieldValue fv;
        fv.amplitude = amplitude_at_lift(point.lift());
        fv.magnitude = std::abs(fv.amplitude);
        return fv;
    }

private:
    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<std::vector<Complex>> scaled_;  // per pivot, Horner order
};

// convenience single-point path; builds the evaluator each call
inline FieldValue evaluate_field(const SectionCoeffs& s, const ProjectivePoint& p) {
    return FieldEvaluator(s)(p);
}

// E_gauss(L) / E_sphere(L) for radial scaling in dimension d:
// C = Gamma(d + 1/2) / (sqrt(d) Gamma(d)), increasing toward 1.
//
// The log-gamma difference cancels two values of size d log d, so the direct
// double route loses ~1e-9 absolutely by d = 1e6. Extended precision covers
// small d; from d = 128 on, the asymptotic expansion of Gamma(d+1/2)/Gamma(d)
// is already exact to below 1e-16.
inline double sphere_gauss_ratio(std::uint64_t d) {
    if (d < 1) throw std::domain_error("sphere_gauss_ratio: d must be >= 1");
    if (d >= 128) {
        const double x = 1.0 / static_cast<double>(d);
        return 1.0 +
               x * (-1.0 / 8 +
                    x * (1.0 / 128 +
                         x * (5.0 / 1024 + x * (-21.0 / 32768 + x * (-399.0 / 262144)))));
    }
    const long double ld = static_cast<long double>(d);
    return static_cast<double>(
        std::exp(std::lgamma(ld + 0.5L) - std::lgamma(ld) - 0.5L * std::log(ld)));
}

}  // namespace kostlan
