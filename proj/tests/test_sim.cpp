#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "brw/deviation.hpp"
#include "brw/errors.hpp"
#include "brw/oracle.hpp"
#include "brw/sim.hpp"

using namespace brw;

namespace {

CheckedModel half_half(StepLaw step) {
    return validate_model(OffspringLaw::finite({{1, 0.5}, {2, 0.5}}),
                          std::move(step));
}

CheckedModel binary(StepLaw step) {
    return validate_model(OffspringLaw::finite({{2, 1.0}}), std::move(step));
}

} // namespace

TEST_CASE("generation zero is a single particle at the origin") {
    auto snap = evolve(half_half(StepLaw::normal(1.0)), 1, 0);
    CHECK(snap.index == 0);
    REQUIRE(snap.positions.size() == 1);
    CHECK(snap.positions[0] == 0.0);
}

TEST_CASE("deterministic binary tree") {
    auto snap = evolve(binary(StepLaw::rademacher()), 5, 3);
    CHECK(snap.positions.size() == 8);
}

TEST_CASE("population mean matches m^n") {
    auto model = half_half(StepLaw::rademacher());
    double acc = 0.0;
    const int reps = 20000, n = 10;
    for (int r = 0; r < reps; ++r)
        acc += static_cast<double>(evolve(model, 1000 + r, n).positions.size());
    double mean = acc / reps;
    double expect = std::pow(1.5, n);
    // population sd is of order m^n; 3 standard errors
    CHECK(std::abs(mean - expect) < 3.0 * expect / std::sqrt(double(reps)));
}

TEST_CASE("martingale W_n has mean 1") {
    auto model = half_half(StepLaw::rademacher());
    for (int n : {5, 10, 15}) {
        double acc = 0.0, acc2 = 0.0;
        const int reps = 4000;
        for (int r = 0; r < reps; ++r) {
            double w = static_cast<double>(
                           evolve(model, 77000 + r, n).positions.size()) /
                       std::pow(1.5, n);
            acc += w;
            acc2 += w * w;
        }
        double mean = acc / reps;
        double sd = std::sqrt(std::max(0.0, acc2 / reps - mean * mean));
        CHECK(std::abs(mean - 1.0) <= 3.0 * sd / std::sqrt(double(reps)));
    }
}

TEST_CASE("level_count") {
    GenerationSnapshot snap;
    snap.positions = {-1.0, 0.5, 2.0};
    CHECK(level_count(snap, 1.0) == 1);
    CHECK(level_count(snap, -5.0) == 3);
    CHECK(level_count(snap, 3.0) == 0);
    double prev = 4;
    for (double y : {-2.0, 0.0, 0.6, 2.5}) {
        double cur = static_cast<double>(level_count(snap, y));
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("integer thresholds") {
    CHECK(deviation_threshold(0.0, 5) == 1);
    CHECK(deviation_threshold(std::log(2.0), 1) == 2);
    CHECK(deviation_threshold(std::log(2.0), 3) == 8); // exact power, no bump
    CHECK(deviation_threshold(0.2, 10) == 8);          // ceil(e^2)
    CHECK(deviation_threshold(5.0, 10) ==
          std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("estimator is deterministic given the seed") {
    auto model = half_half(StepLaw::normal(1.0));
    SimEstimate a = estimate_upper_dev(model, 0.2, 0.5, 6, 20000, 99);
    SimEstimate b = estimate_upper_dev(model, 0.2, 0.5, 6, 20000, 99);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.successes == b.successes);
    CHECK(a.ci_lo == b.ci_lo);
    CHECK(a.ci_hi == b.ci_hi);
    SimEstimate c = estimate_upper_dev(model, 0.2, 0.5, 6, 20000, 100);
    CHECK(a.successes != c.successes);
}

TEST_CASE("trivial estimates") {
    // both children step +1 with probability 1/4
    auto model = binary(StepLaw::rademacher());
    SimEstimate est =
        estimate_upper_dev(model, std::log(2.0) * 0.99, 1.0, 1, 100000, 5);
    CHECK(est.threshold == 2);
    CHECK(est.p_hat == doctest::Approx(0.25).epsilon(0.05));

    // threshold 1 at a very negative level always succeeds
    SimEstimate sure = estimate_upper_dev(model, 0.0, -100.0, 3, 1000, 5);
    CHECK(sure.p_hat == 1.0);
}

TEST_CASE("estimator matches the exact oracle at n = 3") {
    auto model = half_half(StepLaw::rademacher());
    double a = 0.2, x = 1.0 / 3.0;
    int n = 3;
    double exact = exact_upper_dev(model, a, x, n);
    SimEstimate est = estimate_upper_dev(model, a, x, n, 200000, 31337);
    double se = std::sqrt(exact * (1.0 - exact) / est.replicates);
    CHECK(std::abs(est.p_hat - exact) < 4.0 * se);
}

TEST_CASE("empirical growth follows the trichotomy") {
    auto model = half_half(StepLaw::normal(1.0));
    GrowthSummary neg = empirical_growth(model, -1.0, 12, 2000, 404);
    CHECK(std::abs(neg.mean - std::log(1.5)) < 0.05);

    GrowthSummary far = empirical_growth(model, 2.0, 12, 2000, 404);
    CHECK(far.zero_count_replicates > 1000);
}

TEST_CASE("population cap is reported, not silently truncated") {
    auto model = binary(StepLaw::rademacher());
    EvolveCaps caps;
    caps.max_particles = 16;
    CHECK_THROWS_AS(evolve(model, 1, 10, caps), PopulationCapExceeded);
    SimEstimate est = estimate_upper_dev(model, 0.0, -1.0, 10, 50, 1, caps);
    CHECK(est.capped_replicates == 50);
}

TEST_CASE("forced b-ary prefix") {
    auto model = half_half(StepLaw::rademacher());
    BAryStrategy strat;
    strat.t_n = 1;
    strat.eta = 0.5;
    ConditionedRun run = conditioned_run(model, strat, 0.1, 0.2, 4, 11);
    // one forced generation: log p_2 + 2 log P(X >= 0.5)
    CHECK(run.forced_log_weight ==
          doctest::Approx(-3.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("b-ary lower bound stays below the naive estimate") {
    auto model = half_half(StepLaw::rademacher());
    double a = 0.2, x = 1.0 / 3.0;
    int n = 4;
    SimEstimate naive = estimate_upper_dev(model, a, x, n, 200000, 2024);
    REQUIRE(naive.p_hat > 0.0);

    BAryStrategy strat;
    strat.t_n = 2;
    strat.eta = 0.5;
    int succ = 0;
    const int runs = 4000;
    double weight = 0.0;
    for (int r = 0; r < runs; ++r) {
        ConditionedRun run = conditioned_run(model, strat, a, x, n, 5000 + r);
        weight = run.forced_log_weight;
        if (run.success) ++succ;
    }
    REQUIRE(succ > 0);
    double lower = weight + std::log(double(succ) / runs);
    double se = std::sqrt(naive.p_hat * (1.0 - naive.p_hat) / naive.replicates);
    CHECK(lower <= std::log(naive.p_hat + 4.0 * se));
}

TEST_CASE("max-boost success frequency rises with n") {
    auto model = half_half(StepLaw::normal(1.0));
    MaxBoostStrategy strat;
    strat.s = 0.5;
    strat.y = 0.3;
    strat.eps = 0.05;
    double prev = -1.0;
    for (int n : {10, 14, 18}) {
        int succ = 0;
        const int runs = 1500;
        for (int r = 0; r < runs; ++r)
            if (conditioned_run(model, strat, 0.05, 0.2, n, 9000 + r).success)
                ++succ;
        double f = double(succ) / runs;
        CHECK(f >= prev - 0.08); // noisy, but the trend should not collapse
        prev = f;
    }
    CHECK(prev > 0.3);
}
