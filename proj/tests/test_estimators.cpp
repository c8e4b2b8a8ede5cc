#include <catch2/catch_amalgamated.hpp>

#include "catalog.hpp"
#include "worm/estimators.hpp"
#include "worm/exact_oracle.hpp"
#include "worm/spectral.hpp"

using namespace worm;

TEST_CASE("plan formulas reproduce hand-computed values on K2") {
    auto k2 = generate("complete", {2});

    // 4 (log 2 + log 4) * 1 * 1 * 16 = 133.08... -> 134
    CHECK(burn_in_steps(k2, 0.5) == 134);

    // 16 * 4 * (3/2)^2 * 2 * 1 * 1 * 32 = 9216 exactly
    auto pc = plan_susceptibility(k2, 0.5, 0.5);
    CHECK(pc.n_samples == 9216);
    CHECK(pc.tau == 134);
    CHECK(pc.k == 0);
    CHECK_FALSE(pc.manual);
    CHECK(pc.provenance() == "paper-exact");

    // 16 * 4 * (5/2)^2 * 2 * 1 * 1 * 64 * 2 = 102400 exactly; tau at delta/2
    auto pr = plan_correlation(k2, 0.5, 0.5, 1, 0.5);
    CHECK(pr.n_samples == 102400);
    CHECK(pr.tau == burn_in_steps(k2, 0.25));
    CHECK(pr.tau == 178);  // 4 (log 2 + log 8) * 16 = 177.4... -> 178
    CHECK(pr.k == 1);
}

TEST_CASE("plans reject bad tolerances and respond monotonically") {
    auto g = generate("cycle", {4});
    CHECK_THROWS_AS(burn_in_steps(g, 0.0), BadTolerance);
    CHECK_THROWS_AS(burn_in_steps(g, 1.0), BadTolerance);
    CHECK_THROWS_AS(plan_susceptibility(g, 0.0, 0.5), BadTolerance);
    CHECK_THROWS_AS(plan_susceptibility(g, 0.5, 1.5), BadTolerance);
    CHECK_THROWS_AS(plan_correlation(g, 0.5, 0.5, 0, 0.5), BadTolerance);

    CHECK(plan_susceptibility(g, 0.1, 0.5).n_samples >
          plan_susceptibility(g, 0.2, 0.5).n_samples);
    CHECK(plan_susceptibility(g, 0.5, 0.1).n_samples >
          plan_susceptibility(g, 0.5, 0.2).n_samples);
    CHECK(burn_in_steps(g, 0.01) > burn_in_steps(g, 0.1));
    CHECK(burn_in_steps(generate("cycle", {6}), 0.5) > burn_in_steps(g, 0.5));
    // lowering x inflates the x^-k factor
    CHECK(plan_correlation(g, 0.5, 0.5, 2, 0.3).n_samples >
          plan_correlation(g, 0.5, 0.5, 2, 0.6).n_samples);
}

TEST_CASE("planner tolerances dominate the true mixing behaviour on small graphs") {
    // tau was sized from an upper bound on mix(0, delta); the actual mixing
    // time of the chain must come in under it.  Likewise N must dominate the
    // variance-based requirement built from the true pi(C0) and t_rel.
    for (const auto& g : {generate("complete", {2}), generate("cycle", {3}),
                          generate("cycle", {4})}) {
        for (double x : {0.3, 0.7}) {
            auto params = ChainParams::from_x(x);
            auto cm = build_chain_matrix(g, params);
            int zero = cm.index.at(EdgeSubset(g.m()));
            for (double delta : {0.25, 0.05}) {
                CHECK(burn_in_steps(g, delta) >= tv_mixing_time(cm, zero, delta));
            }
            double eps = 0.5, delta = 0.25;
            SubgraphClassTable tab = enumerate_classes(g, x);
            double need = 16.0 / (eps * eps) * (1 + eps) * (1 + eps) / delta *
                          relaxation_time(cm) / tab.pi_c0();
            CHECK(static_cast<double>(plan_susceptibility(g, eps, delta).n_samples) >= need);
        }
    }
}

TEST_CASE("median trick replica counts") {
    CHECK(median_replicas(0.5) == 7);
    CHECK(median_replicas(1.0 / 16.0) == 25);
    CHECK(median_replicas(0.3) == 13);
    CHECK_THROWS_AS(median_replicas(0.0), BadTolerance);
    CHECK_THROWS_AS(median_replicas(1.0), BadTolerance);
}

namespace {
EstimatorPlan manual_plan(long long tau, long long n, int k = 0) {
    EstimatorPlan p;
    p.epsilon = 0.05;
    p.delta = 0.25;
    p.tau = tau;
    p.n_samples = n;
    p.k = k;
    p.manual = true;
    return p;
}
}  // namespace

TEST_CASE("susceptibility estimate agrees with the exact value") {
    for (const auto& g : {generate("complete", {2}), generate("cycle", {3})}) {
        double beta = 0.55;
        auto params = ChainParams::from_beta(beta);
        double truth = susceptibility_exact(g, beta);
        auto e = estimate_susceptibility(g, params, manual_plan(5000, 400000), 20240817);
        CHECK(e.std_error > 0);
        CHECK(std::fabs(e.value - truth) < 4.0 * e.std_error);
        CHECK(e.steps == 405000);
        CHECK(e.plan.provenance() == "manual");
    }
}

TEST_CASE("correlation estimate agrees with the exact value") {
    auto g = generate("cycle", {4});
    double beta = 0.7;
    auto params = ChainParams::from_beta(beta);
    double truth = two_point_exact(g, beta, 0, 1);
    auto e = estimate_correlation(g, params, 0, 1, manual_plan(5000, 600000, 2), 91);
    CHECK(std::fabs(e.value - truth) < 4.0 * e.std_error);
    CHECK(e.frac_uv > 0);
    // the distance cap is enforced before any sampling work
    CHECK_THROWS_AS(estimate_correlation(g, params, 0, 2, manual_plan(10, 10, 1), 1),
                    DistanceExceedsK);
}

TEST_CASE("estimates are reproducible for a fixed seed") {
    auto g = generate("cycle", {3});
    auto params = ChainParams::from_x(0.4);
    auto a = estimate_susceptibility(g, params, manual_plan(100, 20000), 7);
    auto b = estimate_susceptibility(g, params, manual_plan(100, 20000), 7);
    CHECK(a.value == b.value);
    CHECK(a.frac_c0 == b.frac_c0);
    auto c = estimate_susceptibility(g, params, manual_plan(100, 20000), 8);
    CHECK(a.value != c.value);
}

TEST_CASE("tiny sample budgets fail loudly instead of returning garbage") {
    auto g = generate("cycle", {6});
    // at x near 0 from a handful of steps the C_uv indicator stays empty
    auto params = ChainParams::from_x(0.01);
    CHECK_THROWS_AS(estimate_correlation(g, params, 0, 3, manual_plan(0, 3, 3), 5),
                    ZeroSampleFraction);
}

TEST_CASE("median amplification returns a replicate and is deterministic") {
    auto g = generate("complete", {2});
    double beta = 0.55;
    auto params = ChainParams::from_beta(beta);
    auto plan = manual_plan(500, 40000);
    auto med = median_amplify(g, params, Target::Chi, -1, -1, plan, 0.5, 99);
    auto med2 = median_amplify(g, params, Target::Chi, -1, -1, plan, 0.5, 99);
    CHECK(med.value == med2.value);
    CHECK(med.seed == 99);

    // the median must be one of the replicate values, bracketed by the others
    std::vector<double> vals;
    for (int i = 0; i < median_replicas(0.5); ++i) {
        auto r = estimate_susceptibility(g, params, plan, split_seed(99, i));
        vals.push_back(r.value);
    }
    std::sort(vals.begin(), vals.end());
    CHECK(med.value == vals[vals.size() / 2]);

    double truth = susceptibility_exact(g, beta);
    CHECK(std::fabs(med.value - truth) < 4.0 * med.std_error);
}
