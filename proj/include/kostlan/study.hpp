#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kostlan/entropy.hpp"
#include "kostlan/solver.hpp"
#include "kostlan/stats.hpp"

namespace kostlan {

struct StudyReport {
    EnsembleSpec spec;
    std::size_t trials = 0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    Interval mean_ci;    // bootstrap 95%
    Interval median_ci;  // bootstrap 95%
    double mean_se = 0.0;
    double median_se = 0.0;
    std::vector<std::pair<double, double>> tail_profile;  // (r, P(|L - median| > r))
    std::optional<BoundEnvelope> envelope;
    std::vector<TrialRecord> records;  // per-trial detail; aggregates above
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& body) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

// Monte Carlo study of the sup-norm functional. Trials are scheduled across
// threads but each is a pure function of (master_seed, trial_index), and
// aggregation is index-ordered, so the report does not depend on the thread
// count or execution order.
inline StudyReport run_study(const EnsembleSpec& spec, std::size_t trials,
                             const SolverConfig& cfg = {}, int threads = 0) {
    if (trials < 30) throw std::domain_error("run_study: need at least 30 trials");
    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const auto basis = std::make_shared<const MonomialBasis>(spec.m, spec.n);
    const SupSolver solver(spec.m, spec.n, cfg);

    StudyReport report;
    report.spec = spec;
    report.trials = trials;
    report.records.resize(trials);
    detail::parallel_for(trials, threads, [&](std::size_t i) {
        const SectionCoeffs s = sample_coefficients(spec, i);
        try {
            report.records[i] = solver.solve(FieldEvaluator(basis, s), s.trial_seed);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_study: trial " + std::to_string(i) + " (seed " +
                                     std::to_string(s.trial_seed) + ") failed: " + e.what());
        }
    });

    std::vector<double> sups(trials);
    for (std::size_t i = 0; i < trials; ++i) sups[i] = report.records[i].sup_value;
    report.mean = kostlan::mean(sups);
    report.median = kostlan::median(sups);
    report.std_dev = trials > 1 ? stddev(sups) : 0.0;

    const std::uint64_t boot_seed = mix_seed(spec.master_seed, trials, /*tag=*/0xB5);
    const BootstrapSummary bm = bootstrap(sups, Statistic::mean, 1000, boot_seed);
    const BootstrapSummary bmed = bootstrap(sups, Statistic::median, 1000, boot_seed ^ 1);
    report.mean_ci = bm.ci95;
    report.mean_se = bm.se;
    report.median_ci = bmed.ci95;
    report.median_se = bmed.se;

    for (int k = 0; k <= 12; ++k) {
        const double r = 0.25 * k;
        std::size_t hits = 0;
        for (double v : sups)
            if (std::abs(v - report.median) > r) ++hits;
        report.tail_profile.emplace_back(r, static_cast<double>(hits) / trials);
    }

    if (spec.n >= 3) report.envelope = predicted_envelope(spec.m, spec.n);
    return report;
}

struct ConcentrationRow {
    double r = 0.0;
    double empirical = 0.0;
    double bound = 0.0;  // e^{-r^2/2}
    bool pass = false;
};

// Checks the exponential concentration of |L - median| against its tail bound,
// with three binomial standard errors of slack.
inline std::vector<ConcentrationRow> concentration_check(const StudyReport& report) {
    if (report.trials < 100)
        throw std::domain_error("concentration_check: need at least 100 trials");
    std::vector<ConcentrationRow> rows;
    rows.reserve(report.tail_profile.size());
    for (const auto& [r, emp] : report.tail_profile) {
        ConcentrationRow row;
        row.r = r;
        row.empirical = emp;
        row.bound = levy_tail(r);
        const double se = std::sqrt(emp * (1.0 - emp) / static_cast<double>(report.trials));
        row.pass = emp <= row.bound + 3.0 * se;
        rows.push_back(row);
    }
    return rows;
}

// |median - mean| / sqrt(log n); tends to 0 in n
inline double median_mean_gap(const StudyReport& report) {
    if (report.spec.n <= 1) throw std::domain_error("median_mean_gap: needs n > 1");
    return std::abs(report.median - report.mean) /
           std::sqrt(std::log(static_cast<double>(report.spec.n)));
}

struct TailEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

inline TailEstimate tail_probability_from(std::span<const double> sup_values, double a) {
    if (sup_values.empty()) throw std::domain_error("tail_probability: empty sample");
    std::size_t hits = 0;
    for (double v : sup_values)
        if (v > a) ++hits;
    TailEstimate te;
    te.estimate = static_cast<double>(hits) / static_cast<double>(sup_values.size());
    te.standard_error = std::sqrt(te.estimate * (1.0 - te.estimate) /
                                  static_cast<double>(sup_values.size()));
    return te;
}

// empirical P(sup > a) over fresh trials of the given spec
inline TailEstimate tail_probability(const EnsembleSpec& spec, double a, std::size_t trials,
                                     const SolverConfig& cfg = {}, int threads = 0) {
    if (trials < 100) throw std::domain_error("tail_probability: need at least 100 trials");
    const StudyReport report = run_study(spec, trials, cfg, threads);
    std::vector<double> sups(report.trials);
    for (std::size_t i = 0; i < report.trials; ++i) sups[i] = report.records[i].sup_value;
    return tail_probability_from(sups, a);
}

}  // namespace kostlan
