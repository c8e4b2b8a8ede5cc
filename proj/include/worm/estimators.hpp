#pragma once

// FPRAS constructions: sample-complexity planning (tau, N), time-average
// estimators for pi_x(C0) and pi_x(C_uv), the susceptibility and k-restricted
// correlation estimators, and median-trick amplification.

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <vector>

#include "worm/chain.hpp"

namespace worm {

struct EstimatorPlan {
    double epsilon = 0;
    double delta = 0;
    long long tau = 0;        // burn-in steps
    long long n_samples = 0;  // retained steps
    int k = 0;                // distance cap for correlations; 0 = n/a
    bool manual = false;      // true when tau or N were overridden

    std::string provenance() const { return manual ? "manual" : "paper-exact"; }
};

// tau = ceil(4 (log 2 + log(2/delta)/m) Delta m^2 n^4)
inline long long burn_in_steps(const Graph& g, double delta) {
    if (!(delta > 0) || !(delta < 1)) throw BadTolerance("delta must be in (0,1)");
    const double n = g.n, m = g.m(), D = g.max_degree;
    return static_cast<long long>(
        std::ceil(4.0 * (std::log(2.0) + std::log(2.0 / delta) / m) * D * m * m * n * n * n * n));
}

// N = ceil(16 eps^-2 (1+eps)^2 delta^-1 Delta m n^5)
inline EstimatorPlan plan_susceptibility(const Graph& g, double epsilon, double delta) {
    if (!(epsilon > 0) || !(epsilon < 1)) throw BadTolerance("epsilon must be in (0,1)");
    if (!(delta > 0) || !(delta < 1)) throw BadTolerance("delta must be in (0,1)");
    const double n = g.n, m = g.m(), D = g.max_degree;
    EstimatorPlan p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.tau = burn_in_steps(g, delta);
    p.n_samples = static_cast<long long>(std::ceil(
        16.0 / (epsilon * epsilon) * (1.0 + epsilon) * (1.0 + epsilon) / delta * D * m *
        n * n * n * n * n));
    return p;
}

// N = ceil(16 eps^-2 (2+eps)^2 delta^-1 Delta m n^6 x^-k), tau with delta/2
inline EstimatorPlan plan_correlation(const Graph& g, double epsilon, double delta, int k,
                                      double x) {
    if (!(epsilon > 0) || !(epsilon < 1)) throw BadTolerance("epsilon must be in (0,1)");
    if (!(delta > 0) || !(delta < 1)) throw BadTolerance("delta must be in (0,1)");
    if (k < 1) throw BadTolerance("k must be >= 1");
    const double n = g.n, m = g.m(), D = g.max_degree;
    EstimatorPlan p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.k = k;
    p.tau = burn_in_steps(g, delta / 2.0);
    p.n_samples = static_cast<long long>(std::ceil(
        16.0 / (epsilon * epsilon) * (2.0 + epsilon) * (2.0 + epsilon) / delta * D * m *
        n * n * n * n * n * n * std::pow(x, -k)));
    return p;
}

struct Estimate {
    double value = 0;
    EstimatorPlan plan;
    std::uint64_t seed = 0;
    double frac_c0 = 0;   // hat S_0
    double frac_uv = 0;   // hat S_uv (correlation target only)
    long long steps = 0;  // tau + N
    double std_error = 0; // batch-means standard error of `value`
};

namespace detail {
struct TrajectoryCounts {
    long long c0 = 0, uv = 0;
    std::vector<long long> c0_batches, uv_batches;
};

// Burn in tau steps from 0, then accumulate both indicators over N steps.
// Integer counters throughout; division deferred to the caller.
inline TrajectoryCounts run_indicators(const Graph& g, const ChainParams& params, long long tau,
                                       long long n_samples, int u, int v, std::uint64_t seed,
                                       int batches = 32) {
    Rng rng(seed);
    WormState s = zero_state(g);
    for (long long t = 0; t < tau; ++t) s = step(g, s, params, rng);
    TrajectoryCounts c;
    c.c0_batches.assign(batches, 0);
    c.uv_batches.assign(batches, 0);
    for (long long t = 0; t < n_samples; ++t) {
        s = step(g, s, params, rng);
        int b = static_cast<int>(t * batches / n_samples);
        if (s.in_c0()) {
            ++c.c0;
            ++c.c0_batches[b];
        } else if (u >= 0 && s.bd[0] == std::min(u, v) && s.bd[1] == std::max(u, v)) {
            ++c.uv;
            ++c.uv_batches[b];
        }
    }
    return c;
}

inline double batch_stderr(const std::vector<long long>& batches, long long n_samples) {
    int b = static_cast<int>(batches.size());
    double per = static_cast<double>(n_samples) / b;
    double mean = 0;
    for (auto c : batches) mean += c / per;
    mean /= b;
    double var = 0;
    for (auto c : batches) var += (c / per - mean) * (c / per - mean);
    var /= (b - 1);
    return std::sqrt(var / b);
}
}  // namespace detail

// chi estimate: 1 / hat S_0 from a single trajectory started at 0.
inline Estimate estimate_susceptibility(const Graph& g, const ChainParams& params,
                                        const EstimatorPlan& plan, std::uint64_t seed) {
    auto c = detail::run_indicators(g, params, plan.tau, plan.n_samples, -1, -1, seed);
    if (c.c0 == 0) throw ZeroSampleFraction("no C0 visits; N is far too small");
    Estimate e;
    e.plan = plan;
    e.seed = seed;
    e.steps = plan.tau + plan.n_samples;
    e.frac_c0 = static_cast<double>(c.c0) / plan.n_samples;
    e.value = 1.0 / e.frac_c0;
    // d(1/s)/ds = -1/s^2
    e.std_error = detail::batch_stderr(c.c0_batches, plan.n_samples) / (e.frac_c0 * e.frac_c0);
    return e;
}

// (n/2) hat S_uv / hat S_0, both indicators from the same trajectory.
inline Estimate estimate_correlation(const Graph& g, const ChainParams& params, int u, int v,
                                     const EstimatorPlan& plan, std::uint64_t seed) {
    if (plan.k > 0 && graph_distance(g, u, v) > plan.k)
        throw DistanceExceedsK("d(u,v) exceeds the plan's distance cap");
    auto c = detail::run_indicators(g, params, plan.tau, plan.n_samples, u, v, seed);
    if (c.c0 == 0 || c.uv == 0) throw ZeroSampleFraction("empty indicator sum; N too small");
    Estimate e;
    e.plan = plan;
    e.seed = seed;
    e.steps = plan.tau + plan.n_samples;
    e.frac_c0 = static_cast<double>(c.c0) / plan.n_samples;
    e.frac_uv = static_cast<double>(c.uv) / plan.n_samples;
    e.value = (g.n / 2.0) * e.frac_uv / e.frac_c0;
    double se0 = detail::batch_stderr(c.c0_batches, plan.n_samples) / e.frac_c0;
    double seuv = detail::batch_stderr(c.uv_batches, plan.n_samples) / e.frac_uv;
    e.std_error = e.value * std::sqrt(se0 * se0 + seuv * seuv);
    return e;
}

enum class Target { Chi, Correlation };

// k = 6 ceil(lg(1/eta)) + 1 replicas at delta = 1/4; returns their median.
inline int median_replicas(double eta) {
    if (!(eta > 0) || !(eta < 1)) throw BadTolerance("eta must be in (0,1)");
    return 6 * static_cast<int>(std::ceil(std::log2(1.0 / eta))) + 1;
}

inline Estimate median_amplify(const Graph& g, const ChainParams& params, Target target, int u,
                               int v, const EstimatorPlan& base_plan, double eta,
                               std::uint64_t master_seed) {
    int k = median_replicas(eta);
    std::vector<std::future<Estimate>> futs;
    for (int i = 0; i < k; ++i) {
        std::uint64_t seed = split_seed(master_seed, static_cast<std::uint64_t>(i));
        futs.push_back(std::async(std::launch::async, [=, &g]() {
            return target == Target::Chi
                       ? estimate_susceptibility(g, params, base_plan, seed)
                       : estimate_correlation(g, params, u, v, base_plan, seed);
        }));
    }
    std::vector<Estimate> reps;
    for (auto& f : futs) reps.push_back(f.get());
    std::sort(reps.begin(), reps.end(),
              [](const Estimate& a, const Estimate& b) { return a.value < b.value; });
    Estimate out = reps[reps.size() / 2];
    out.seed = master_seed;
    return out;
}

}  // namespace worm
