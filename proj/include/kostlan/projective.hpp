#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "kostlan/io.hpp"
#include "kostlan/rng.hpp"

namespace kostlan {

using Complex = std::complex<double>;

// A point of CP^m held as its canonical unit lift in C^{m+1}: Euclidean norm 1,
// and the first coordinate of largest modulus rotated to be real non-negative.
// Canonical lifts make projective equality a plain componentwise comparison.
class ProjectivePoint {
public:
    static ProjectivePoint from_lift(std::vector<Complex> v) {
        double norm2 = 0.0;
        for (const Complex& c : v) norm2 += std::norm(c);
        if (!(norm2 > 0.0) || !std::isfinite(norm2))
            throw std::domain_error("normalize_lift: zero or non-finite input vector");
        if (v.size() < 2) throw std::domain_error("normalize_lift: need at least 2 coordinates");
        const double inv = 1.0 / std::sqrt(norm2);
        for (Complex& c : v) c *= inv;
        // phase canonicalization; ties broken by lowest index
        std::size_t k = 0;
        double best = std::norm(v[0]);
        for (std::size_t j = 1; j < v.size(); ++j) {
            const double aj = std::norm(v[j]);
            if (aj > best) {
                best = aj;
                k = j;
            }
        }
        const Complex phase = v[k] / std::abs(v[k]);
        const Complex rot = std::conj(phase);
        for (Complex& c : v) c *= rot;
        v[k] = Complex(std::abs(v[k]), 0.0);  // kill residual rounding in Im
        return ProjectivePoint(std::move(v));
    }

    int dim() const { return static_cast<int>(lift_.size()) - 1; }
    std::span<const Complex> lift() const { return lift_; }
    const Complex& operator[](std::size_t j) const { return lift_[j]; }

private:
    explicit ProjectivePoint(std::vector<Complex> v) : lift_(std::move(v)) {}
    std::vector<Complex> lift_;
};

inline ProjectivePoint normalize_lift(std::vector<Complex> v) {
    return ProjectivePoint::from_lift(std::move(v));
}

inline ProjectivePoint basis_point(int m, int k) {
    std::vector<Complex> v(static_cast<std::size_t>(m) + 1, Complex(0.0, 0.0));
    v[static_cast<std::size_t>(k)] = 1.0;
    return ProjectivePoint::from_lift(std::move(v));
}

// Hermitian pairing of unit lifts, sum_j x_j conj(y_j)
inline Complex lift_inner(std::span<const Complex> x, std::span<const Complex> y) {
    Complex s(0.0, 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * std::conj(y[j]);
    return s;
}

inline Complex lift_inner(const ProjectivePoint& p, const ProjectivePoint& q) {
    return lift_inner(p.lift(), q.lift());
}

// Fubini-Study geodesic distance, cos r = |<x, conj y>| on unit lifts.
// Range [0, pi/2]; this normalization has diameter pi/2.
inline double fs_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    if (p.dim() != q.dim()) throw std::domain_error("fs_distance: dimension mismatch");
    const double c = std::clamp(std::abs(lift_inner(p, q)), 0.0, 1.0);
    return std::acos(c);
}

inline double fs_distance_lifts(std::span<const Complex> x, std::span<const Complex> y) {
    const double c = std::clamp(std::abs(lift_inner(x, y)), 0.0, 1.0);
    return std::acos(c);
}

inline bool projectively_equal(const ProjectivePoint& p, const ProjectivePoint& q,
                               double tol = 1e-12) {
    if (p.dim() != q.dim()) return false;
    for (int j = 0; j <= p.dim(); ++j)
        if (std::abs(p[j] - q[j]) > tol) return false;
    return true;
}

// Affine chart: coordinates u where the chart_index-th homogeneous coordinate
// is set to 1. The Kahler potential in such a chart is log(1 + |u|^2).
struct ChartPoint {
    int chart_index = 0;
    std::vector<Complex> affine;  // m entries, original coordinate order minus the pivot
};

inline ChartPoint chart_project(const ProjectivePoint& p, int chart_index) {
    const int m = p.dim();
    if (chart_index < 0 || chart_index > m)
        throw std::domain_error("chart_project: chart index out of range");
    const Complex pivot = p[static_cast<std::size_t>(chart_index)];
    if (std::abs(pivot) == 0.0)
        throw std::domain_error("chart_project: point lies outside this chart");
    ChartPoint cp;
    cp.chart_index = chart_index;
    cp.affine.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j <= m; ++j)
        if (j != chart_index) cp.affine.push_back(p[static_cast<std::size_t>(j)] / pivot);
    return cp;
}

// chart at the largest-modulus coordinate; always well conditioned (|u_j| <= 1)
inline ChartPoint chart_project(const ProjectivePoint& p) {
    int k = 0;
    double best = std::norm(p[0]);
    for (int j = 1; j <= p.dim(); ++j) {
        const double aj = std::norm(p[static_cast<std::size_t>(j)]);
        if (aj > best) {
            best = aj;
            k = j;
        }
    }
    return chart_project(p, k);
}

inline ProjectivePoint chart_embed(const ChartPoint& cp) {
    std::vector<Complex> v;
    v.reserve(cp.affine.size() + 1);
    int j = 0;
    for (const Complex& u : cp.affine) {
        if (j == cp.chart_index) {
            v.push_back(Complex(1.0, 0.0));
            ++j;
        }
        v.push_back(u);
        ++j;
    }
    if (j == cp.chart_index) v.push_back(Complex(1.0, 0.0));
    return ProjectivePoint::from_lift(std::move(v));
}

// Deterministic quasi-uniform points on the unit sphere of C^{m+1}: a Kronecker
// (generalized Fibonacci) sequence in 2(m+1) dimensions pushed through the
// amplitude-phase map, so normalized vectors equidistribute on the sphere.
// Seed only offsets the lattice; cardinalities stay reproducible.
class SphereProbe {
public:
    SphereProbe(int m, std::uint64_t seed) : m_(m) {
        static constexpr int primes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                           23, 29, 31, 37, 41, 43, 47, 53};
        const int dims = 2 * (m + 1);
        if (dims > 16) throw std::domain_error("SphereProbe: dimension too large");
        alpha_.resize(dims);
        offset_.resize(dims);
        std::uint64_t s = seed ^ 0x5EEDFACE5EEDFACEULL;
        for (int k = 0; k < dims; ++k) {
            const double r = std::sqrt(static_cast<double>(primes[k]));
            alpha_[k] = r - std::floor(r);
            offset_[k] = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
        }
    }

    int dim() const { return m_; }

    void lift_at(std::uint64_t i, std::span<Complex> out) const {
        const double t = static_cast<double>(i + 1);
        double norm2 = 0.0;
        for (int j = 0; j <= m_; ++j) {
            const double u1 = frac(alpha_[2 * j] * t + offset_[2 * j]);
            const double u2 = frac(alpha_[2 * j + 1] * t + offset_[2 * j + 1]);
            const double r = std::sqrt(-std::log1p(-std::min(u1, 1.0 - 1e-16)));
            out[static_cast<std::size_t>(j)] = std::polar(r, 2.0 * std::numbers::pi * u2);
            norm2 += r * r;
        }
        if (norm2 < 1e-30) {
            for (int j = 0; j <= m_; ++j) out[static_cast<std::size_t>(j)] = 0.0;
            out[0] = 1.0;
            return;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (int j = 0; j <= m_; ++j) out[static_cast<std::size_t>(j)] *= inv;
    }

    ProjectivePoint point_at(std::uint64_t i) const {
        std::vector<Complex> v(static_cast<std::size_t>(m_) + 1);
        lift_at(i, v);
        return ProjectivePoint::from_lift(std::move(v));
    }

private:
    static double frac(double x) { return x - std::floor(x); }
    int m_;
    std::vector<double> alpha_, offset_;
};

// Maximal radius-separated subset of a probe set, built greedily. A maximal
// packing at radius r covers at radius r, so the cardinality 2-approximates
// the geodesic covering number.
struct GeodesicNet {
    double radius = 0.0;
    int m = 0;
    std::vector<ProjectivePoint> centers;
    std::size_t cardinality() const { return centers.size(); }
};

inline GeodesicNet build_greedy_net(int m, double radius, std::size_t probe_count,
                                    std::uint64_t seed, std::size_t max_centers = 1u << 20) {
    if (!(radius > 0.0)) throw std::domain_error("build_greedy_net: radius must be positive");
    if (m < 1) throw std::domain_error("build_greedy_net: m must be >= 1");
    const std::size_t k = static_cast<std::size_t>(m) + 1;
    SphereProbe probe(m, seed);
    std::vector<Complex> cand(k);
    std::vector<Complex> centers;  // flat buffer, k entries per center
    const double cos_radius = std::cos(radius);
    for (std::uint64_t i = 0; i < probe_count; ++i) {
        probe.lift_at(i, cand);
        bool covered = false;
        for (std::size_t c = 0; c < centers.size(); c += k) {
            // within radius <=> |<x, conj y>| >= cos(radius)
            const Complex ip = lift_inner(std::span<const Complex>(cand),
                                          std::span<const Complex>(centers.data() + c, k));
            if (std::abs(ip) >= cos_radius) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            centers.insert(centers.end(), cand.begin(), cand.end());
            if (centers.size() / k > max_centers)
                throw std::length_error("build_greedy_net: cardinality exceeds configured cap");
        }
    }
    GeodesicNet net;
    net.radius = radius;
    net.m = m;
    net.centers.reserve(centers.size() / k);
    for (std::size_t c = 0; c < centers.size(); c += k)
        net.centers.push_back(ProjectivePoint::from_lift(
            std::vector<Complex>(centers.begin() + static_cast<std::ptrdiff_t>(c),
                                 centers.begin() + static_cast<std::ptrdiff_t>(c + k))));
    return net;
}

// one center per row, interleaved re/im columns
inline std::string net_to_csv(const GeodesicNet& net) {
    io::CsvBuilder csv;
    csv.comment("geodesic net, radius " + io::format_g17(net.radius));
    std::vector<std::string> cols;
    for (int j = 0; j <= net.m; ++j) {
        cols.push_back("re" + std::to_string(j));
        cols.push_back("im" + std::to_string(j));
    }
    csv.header(cols);
    for (const ProjectivePoint& p : net.centers) {
        for (int j = 0; j <= net.m; ++j) {
            csv.cell(p[static_cast<std::size_t>(j)].real());
            csv.cell(p[static_cast<std::size_t>(j)].imag());
        }
        csv.end_row();
    }
    return csv.str();
}

}  // namespace kostlan
