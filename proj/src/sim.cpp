#include "brw/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brw/deviation.hpp"
#include "brw/errors.hpp"

namespace brw {

namespace {

// advance `positions` by `gens` generations in place; returns false (and
// leaves the state mid-flight) if the population cap is hit
bool advance(const CheckedModel& model, RngStream& rng,
             std::vector<double>& positions, int gens, const EvolveCaps& caps) {
    std::vector<double> next;
    for (int g = 0; g < gens; ++g) {
        next.clear();
        next.reserve(positions.size() * 2);
        for (double pos : positions) {
            std::uint64_t k = model.offspring().sample(rng);
            if (next.size() + k > caps.max_particles) return false;
            for (std::uint64_t c = 0; c < k; ++c)
                next.push_back(pos + model.step().sample(rng));
        }
        positions.swap(next);
    }
    return true;
}

double wilson_z() { return 1.959963984540054; }

void wilson_interval(std::uint64_t successes, std::uint64_t n, double* lo,
                     double* hi) {
    if (n == 0) {
        *lo = 0.0;
        *hi = 1.0;
        return;
    }
    double z = wilson_z();
    double nn = static_cast<double>(n);
    double p = static_cast<double>(successes) / nn;
    double denom = 1.0 + z * z / nn;
    double center = (p + z * z / (2.0 * nn)) / denom;
    double half = z / denom *
                  std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
    *lo = std::max(0.0, center - half);
    *hi = std::min(1.0, center + half);
}

} // namespace

GenerationSnapshot evolve(const CheckedModel& model, std::uint64_t seed, int n,
                          const EvolveCaps& caps) {
    if (n < 0) throw OutOfRange("evolve requires n >= 0");
    RngStream rng(seed, 0);
    GenerationSnapshot snap;
    snap.positions = {0.0};
    if (!advance(model, rng, snap.positions, n, caps))
        throw PopulationCapExceeded("generation cap " +
                                    std::to_string(caps.max_particles));
    snap.index = n;
    return snap;
}

std::size_t level_count(const GenerationSnapshot& snapshot, double y) {
    std::size_t c = 0;
    for (double p : snapshot.positions)
        if (p >= y) ++c;
    return c;
}

std::uint64_t deviation_threshold(double a, int n) {
    double v = std::exp(a * static_cast<double>(n));
    if (v >= 9.2e18) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::ceil(v - 1e-12 * v));
}

SimEstimate estimate_upper_dev(const CheckedModel& model, double a, double x,
                               int n, std::uint64_t replicates,
                               std::uint64_t seed, const EvolveCaps& caps,
                               std::vector<ReplicateRecord>* records) {
    if (replicates == 0) throw OutOfRange("replicates must be >= 1");
    SimEstimate est;
    est.replicates = replicates;
    est.seed = seed;
    est.n = n;
    est.a = a;
    est.x = x;
    est.threshold = deviation_threshold(a, n);
    double level = x * static_cast<double>(n);

    std::vector<double> positions;
    for (std::uint64_t r = 0; r < replicates; ++r) {
        RngStream rng(seed, r);
        positions.assign(1, 0.0);
        bool ok = advance(model, rng, positions, n, caps);
        if (!ok) {
            ++est.capped_replicates;
            if (records)
                records->push_back({r, n, 0, 0.0, true});
            continue;
        }
        std::uint64_t count = 0;
        double mx = -std::numeric_limits<double>::infinity();
        for (double p : positions) {
            if (p >= level) ++count;
            mx = std::max(mx, p);
        }
        if (count >= est.threshold) ++est.successes;
        if (records)
            records->push_back({r, n, count, mx, false});
    }
    est.p_hat = static_cast<double>(est.successes) /
                static_cast<double>(est.replicates);
    wilson_interval(est.successes, est.replicates, &est.ci_lo, &est.ci_hi);
    return est;
}

GrowthSummary empirical_growth(const CheckedModel& model, double x, int n,
                               std::uint64_t replicates, std::uint64_t seed,
                               const EvolveCaps& caps) {
    if (replicates == 0) throw OutOfRange("replicates must be >= 1");
    GrowthSummary sum;
    sum.replicates = replicates;
    double level = x * static_cast<double>(n);
    double acc = 0.0, acc2 = 0.0;
    std::uint64_t used = 0;
    std::vector<double> positions;
    for (std::uint64_t r = 0; r < replicates; ++r) {
        RngStream rng(seed, r);
        positions.assign(1, 0.0);
        if (!advance(model, rng, positions, n, caps)) {
            ++sum.capped_replicates;
            continue;
        }
        std::uint64_t count = 0;
        for (double p : positions)
            if (p >= level) ++count;
        if (count == 0) {
            ++sum.zero_count_replicates;
            continue;
        }
        double v = std::log(static_cast<double>(count)) / n;
        acc += v;
        acc2 += v * v;
        ++used;
    }
    if (used > 0) {
        sum.mean = acc / used;
        double var = acc2 / used - sum.mean * sum.mean;
        sum.stddev = std::sqrt(std::max(0.0, var));
    }
    return sum;
}

ConditionedRun conditioned_run(const CheckedModel& model,
                               const BAryStrategy& strategy, double a, double x,
                               int n, std::uint64_t seed,
                               const EvolveCaps& caps) {
    if (strategy.t_n < 0 || strategy.t_n > n)
        throw OutOfRange("B_ARY requires 0 <= t_n <= n");
    StrategyParams sp;
    sp.horizon = static_cast<std::uint64_t>(strategy.t_n);
    sp.eta = strategy.eta;
    ConditionedRun run;
    run.forced_log_weight =
        strategy_log_prob(model, Strategy::B_ARY, sp); // throws if impossible

    RngStream rng(seed, 0);
    std::uint64_t b = model.b();
    double L = model.L();
    double cutoff = L - strategy.eta;
    std::vector<double> positions = {0.0};
    std::vector<double> next;
    for (int g = 0; g < strategy.t_n; ++g) {
        next.clear();
        if (positions.size() * b > caps.max_particles) {
            run.capped = true;
            return run;
        }
        next.reserve(positions.size() * b);
        for (double pos : positions)
            for (std::uint64_t c = 0; c < b; ++c)
                next.push_back(pos + model.step().sample_tail(cutoff, rng));
        positions.swap(next);
    }
    if (!advance(model, rng, positions, n - strategy.t_n, caps)) {
        run.capped = true;
        return run;
    }
    std::uint64_t threshold = deviation_threshold(a, n);
    double level = x * static_cast<double>(n);
    std::uint64_t count = 0;
    for (double p : positions)
        if (p >= level) ++count;
    run.success = count >= threshold;
    return run;
}

ConditionedRun conditioned_run(const CheckedModel& model,
                               const MaxBoostStrategy& strategy, double a,
                               double x, int n, std::uint64_t seed,
                               const EvolveCaps& caps) {
    int t_n = static_cast<int>(std::ceil(strategy.s * n));
    if (t_n < 0 || t_n > n) throw OutOfRange("MAX_BOOST requires 0 <= ceil(sn) <= n");
    ConditionedRun run;
    run.forced_log_weight = 0.0; // free evolution, no forced prefix

    RngStream rng(seed, 0);
    std::vector<double> positions = {0.0};
    if (!advance(model, rng, positions, t_n, caps)) {
        run.capped = true;
        return run;
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (double p : positions) mx = std::max(mx, p);
    bool boost = mx >= (1.0 + strategy.eps) * strategy.y * n;
    if (!advance(model, rng, positions, n - t_n, caps)) {
        run.capped = true;
        return run;
    }
    std::uint64_t threshold = deviation_threshold(a, n);
    double level = x * static_cast<double>(n);
    std::uint64_t count = 0;
    for (double p : positions)
        if (p >= level) ++count;
    run.success = boost && count >= threshold;
    return run;
}

} // namespace brw
