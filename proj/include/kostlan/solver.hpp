#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "kostlan/ensemble.hpp"
#include "kostlan/projective.hpp"

namespace kostlan {

// Grid-plus-refinement sup-norm solver. The field decorrelates at FS scale
// n^{-1/2}, so the seeding grid uses spacing n^{-1/2}/grid_factor and local
// ascent recovers the in-basin maximum.
struct SolverConfig {
    double grid_factor = 6.0;   // grid spacing = n^{-1/2} / grid_factor
    int refine_iters = 40;
    double refine_tol = 1e-10;
    int multistart_top_k = 12;
    double grid_kappa = 2.0;    // density multiplier for the m >= 2 probe grid
    // optional (m+1)x(m+1) row-major unitary applied to every lift before
    // evaluation; rotates the grid/chart frame without touching the section
    std::vector<Complex> frame_unitary;

    void validate() const {
        if (!(grid_factor >= 2.0))
            throw std::domain_error("solver config: grid_factor must be >= 2");
        if (!(refine_tol > 0.0))
            throw std::domain_error("solver config: refine_tol must be positive");
        if (refine_iters < 1)
            throw std::domain_error("solver config: refine_iters must be >= 1");
        if (multistart_top_k < 1)
            throw std::domain_error("solver config: multistart_top_k must be >= 1");
        if (!(grid_kappa > 0.0))
            throw std::domain_error("solver config: grid_kappa must be positive");
    }
};

struct TrialRecord {
    std::uint64_t trial_seed = 0;
    double sup_value = 0.0;
    std::vector<Complex> argmax_lift;
    double solver_gap = 0.0;   // refined best minus grid best (>= 0)
    double wall_time = 0.0;    // seconds; diagnostics only, never digested

    ProjectivePoint argmax() const {
        return ProjectivePoint::from_lift(argmax_lift);
    }
};

inline std::size_t solver_grid_size(int m, int n, const SolverConfig& cfg) {
    const double gf2n = cfg.grid_factor * cfg.grid_factor * std::max(1, n);
    if (m == 1)
        return std::max<std::size_t>(
            32, static_cast<std::size_t>(std::ceil(4.0 / std::numbers::pi * gf2n)));
    return std::max<std::size_t>(
        64, static_cast<std::size_t>(std::ceil(cfg.grid_kappa * std::pow(gf2n, m))));
}

// Deterministic quasi-uniform seeding set, shared across all trials of a study.
// m = 1 uses the Fibonacci spiral on the round CP^1; m >= 2 the Kronecker
// sphere probe projected to CP^m.
class SupSolver {
public:
    SupSolver(int m, int n, SolverConfig cfg) : m_(m), n_(n), cfg_(std::move(cfg)) {
        cfg_.validate();
        if (!cfg_.frame_unitary.empty() &&
            cfg_.frame_unitary.size() != static_cast<std::size_t>(m + 1) * (m + 1))
            throw std::domain_error("solver config: frame_unitary has wrong shape");
        spacing_ = 1.0 / (std::sqrt(static_cast<double>(std::max(1, n))) * cfg_.grid_factor);
        const std::size_t count = solver_grid_size(m, n, cfg_);
        const std::size_t k = static_cast<std::size_t>(m) + 1;
        grid_.resize(count * k);
        if (m == 1) {
            constexpr double golden = 0.6180339887498948482;
            for (std::size_t i = 0; i < count; ++i) {
                const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
                const double phi_angle = 2.0 * std::numbers::pi * std::fmod(i * golden, 1.0);
                const double half_theta = 0.5 * std::acos(std::clamp(z, -1.0, 1.0));
                grid_[2 * i] = Complex(std::cos(half_theta), 0.0);
                grid_[2 * i + 1] = std::polar(std::sin(half_theta), phi_angle);
            }
        } else {
            SphereProbe probe(m, /*seed=*/0x9E1DULL);
            for (std::size_t i = 0; i < count; ++i)
                probe.lift_at(i, std::span<Complex>(grid_.data() + i * k, k));
        }
    }

    int m() const { return m_; }
    int n() const { return n_; }
    double spacing() const { return spacing_; }
    std::size_t grid_size() const { return grid_.size() / (static_cast<std::size_t>(m_) + 1); }
    std::span<const Complex> grid_lift(std::size_t i) const {
        const std::size_t k = static_cast<std::size_t>(m_) + 1;
        return {grid_.data() + i * k, k};
    }

    TrialRecord solve(const FieldEvaluator& ev, std::uint64_t trial_seed) const {
        const auto t0 = std::chrono::steady_clock::now();
        if (ev.m() != m_ || ev.n() != n_)
            throw std::domain_error("SupSolver: evaluator dimension mismatch");
        const std::size_t k = static_cast<std::size_t>(m_) + 1;
        const std::size_t count = grid_size();

        std::vector<double> values(count);
        std::vector<Complex> framed(k);
        for (std::size_t i = 0; i < count; ++i)
            values[i] = std::norm(ev.amplitude_at_lift(apply_frame(grid_lift(i), framed)));

        // multistart candidates: best grid values, kept pairwise separated so
        // several distinct basins get refined
        const std::size_t pool =
            std::min(count, static_cast<std::size_t>(4 * cfg_.multistart_top_k + 16));
        std::vector<std::uint32_t> order(count);
        std::iota(order.begin(), order.end(), 0u);
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool - 1),
                         order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return values[a] > values[b]; });
        order.resize(pool);
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return values[a] > values[b]; });
        std::vector<std::uint32_t> starts;
        for (std::uint32_t idx : order) {
            bool close = false;
            for (std::uint32_t s : starts)
                if (fs_distance_lifts(grid_lift(idx), grid_lift(s)) <= 3.0 * spacing_) {
                    close = true;
                    break;
                }
            if (!close) starts.push_back(idx);
            if (starts.size() >= static_cast<std::size_t>(cfg_.multistart_top_k)) break;
        }

        const double grid_best = std::sqrt(values[order.front()]);
        double best_val2 = values[order.front()];
        std::vector<Complex> best_lift(grid_lift(order.front()).begin(),
                                       grid_lift(order.front()).end());
        for (std::uint32_t s : starts) {
            auto [val2, lift] = refine(ev, grid_lift(s));
            if (val2 > best_val2) {
                best_val2 = val2;
                best_lift = std::move(lift);
            }
        }

        TrialRecord rec;
        rec.trial_seed = trial_seed;
        rec.sup_value = std::sqrt(best_val2);
        rec.argmax_lift = std::move(best_lift);
        rec.solver_gap = rec.sup_value - grid_best;
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rec;
    }

private:
    std::span<const Complex> apply_frame(std::span<const Complex> lift,
                                         std::vector<Complex>& buf) const {
        if (cfg_.frame_unitary.empty()) return lift;
        const std::size_t k = lift.size();
        for (std::size_t r = 0; r < k; ++r) {
            Complex acc(0.0, 0.0);
            for (std::size_t c = 0; c < k; ++c) acc += cfg_.frame_unitary[r * k + c] * lift[c];
            buf[r] = acc;
        }
        return buf;
    }

    // derivative-free cyclic coordinate ascent with quadratic interpolation on
    // |field|^2 in the affine chart of the start point's largest coordinate
    std::pair<double, std::vector<Complex>> refine(const FieldEvaluator& ev,
                                                   std::span<const Complex> start) const {
        const std::size_t k = static_cast<std::size_t>(m_) + 1;
        std::size_t pivot = 0;
        double bestmod = std::norm(start[0]);
        for (std::size_t j = 1; j < k; ++j)
            if (std::norm(start[j]) > bestmod) {
                bestmod = std::norm(start[j]);
                pivot = j;
            }
        const Complex inv_pivot = 1.0 / start[pivot];
        std::vector<double> u(2 * static_cast<std::size_t>(m_));
        {
            std::size_t v = 0;
            for (std::size_t j = 0; j < k; ++j) {
                if (j == pivot) continue;
                const Complex c = start[j] * inv_pivot;
                u[2 * v] = c.real();
                u[2 * v + 1] = c.imag();
                ++v;
            }
        }

        std::vector<Complex> lift(k), framed(k);
        const auto objective = [&](const std::vector<double>& uu) {
            double norm2 = 1.0;
            std::size_t v = 0;
            for (std::size_t j = 0; j < k; ++j) {
                if (j == pivot) {
                    lift[j] = 1.0;
                    continue;
                }
                lift[j] = Complex(uu[2 * v], uu[2 * v + 1]);
                norm2 += std::norm(lift[j]);
                ++v;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& c : lift) c *= inv;
            return std::norm(ev.amplitude_at_lift(apply_frame(lift, framed)));
        };

        double g0 = objective(u);
        double delta = spacing_;
        std::vector<double> trial = u;
        for (int iter = 0; iter < cfg_.refine_iters; ++iter) {
            bool improved = false;
            double max_step = 0.0;
            for (std::size_t d = 0; d < u.size(); ++d) {
                trial = u;
                trial[d] = u[d] + delta;
                const double gp = objective(trial);
                trial[d] = u[d] - delta;
                const double gm = objective(trial);
                double best_local = g0;
                double best_coord = u[d];
                if (gp > best_local) {
                    best_local = gp;
                    best_coord = u[d] + delta;
                }
                if (gm > best_local) {
                    best_local = gm;
                    best_coord = u[d] - delta;
                }
                const double denom = gp + gm - 2.0 * g0;
                if (denom < 0.0) {
                    double step = 0.5 * delta * (gp - gm) / (-denom);
                    step = std::clamp(step, -2.0 * delta, 2.0 * delta);
                    trial[d] = u[d] + step;
                    const double gv = objective(trial);
                    if (gv > best_local) {
                        best_local = gv;
                        best_coord = u[d] + step;
                    }
                }
                if (best_local > g0) {
                    g0 = best_local;
                    max_step = std::max(max_step, std::abs(best_coord - u[d]));
                    u[d] = best_coord;
                    improved = true;
                }
            }
            if (!improved) {
                delta *= 0.25;
                if (delta < cfg_.refine_tol * spacing_ || delta < 1e-15) break;
            } else {
                // quadratic-model accuracy tracks the step scale; follow it down
                delta = std::min(delta, std::max(4.0 * max_step, 1e-15));
            }
        }

        // final unit lift for the refined coordinates
        double norm2 = 1.0;
        std::size_t v = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == pivot) {
                lift[j] = 1.0;
                continue;
            }
            lift[j] = Complex(u[2 * v], u[2 * v + 1]);
            norm2 += std::norm(lift[j]);
            ++v;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : lift) c *= inv;
        return {g0, lift};
    }

    int m_, n_;
    SolverConfig cfg_;
    double spacing_;
    std::vector<Complex> grid_;
};

// single-shot convenience path
inline TrialRecord sup_norm(const SectionCoeffs& s, const SolverConfig& cfg = {}) {
    SupSolver solver(s.spec.m, s.spec.n, cfg);
    return solver.solve(FieldEvaluator(s), s.trial_seed);
}

}  // namespace kostlan
