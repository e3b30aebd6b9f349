#pragma once

#include <cstdint>
#include <vector>

#include "brw/model.hpp"

namespace brw {

struct GenerationSnapshot {
    int index = 0;
    std::vector<double> positions;
};

struct EvolveCaps {
    std::size_t max_particles = 10'000'000;
};

// One branching random walk path to generation n; generation 0 is {0}.
GenerationSnapshot evolve(const CheckedModel& model, std::uint64_t seed, int n,
                          const EvolveCaps& caps = {});

// number of particles at position >= y
std::size_t level_count(const GenerationSnapshot& snapshot, double y);

// integer success threshold ceil(e^{a n}); saturates at uint64 max
std::uint64_t deviation_threshold(double a, int n);

struct SimEstimate {
    double p_hat = 0.0;
    std::uint64_t replicates = 0;
    std::uint64_t successes = 0;
    double ci_lo = 0.0, ci_hi = 0.0; // Wilson 95%
    std::uint64_t seed = 0;
    int n = 0;
    std::uint64_t threshold = 0;
    double a = 0.0, x = 0.0;
    std::uint64_t capped_replicates = 0;
};

// Optional per-replicate record sink for CSV export.
struct ReplicateRecord {
    std::uint64_t replicate;
    int n;
    std::uint64_t count_at_level;
    double max_position;
    bool capped;
};

SimEstimate estimate_upper_dev(const CheckedModel& model, double a, double x,
                               int n, std::uint64_t replicates,
                               std::uint64_t seed, const EvolveCaps& caps = {},
                               std::vector<ReplicateRecord>* records = nullptr);

struct GrowthSummary {
    double mean = 0.0;   // over replicates with a nonzero level count
    double stddev = 0.0;
    std::uint64_t replicates = 0;
    std::uint64_t zero_count_replicates = 0;
    std::uint64_t capped_replicates = 0;
};

// sample mean/sd of (1/n) log Z_n[xn, inf)
GrowthSummary empirical_growth(const CheckedModel& model, double x, int n,
                               std::uint64_t replicates, std::uint64_t seed,
                               const EvolveCaps& caps = {});

struct BAryStrategy {
    int t_n = 0;      // forced generations
    double eta = 0.0; // steps conditioned on X >= L - eta
};

struct MaxBoostStrategy {
    double s = 0.0;   // t_n = ceil(s n)
    double y = 0.0;   // maximum target slope
    double eps = 0.0; // target is (1 + eps) y n
};

struct ConditionedRun {
    bool success = false;
    double forced_log_weight = 0.0;
    bool capped = false;
};

ConditionedRun conditioned_run(const CheckedModel& model,
                               const BAryStrategy& strategy, double a, double x,
                               int n, std::uint64_t seed,
                               const EvolveCaps& caps = {});

ConditionedRun conditioned_run(const CheckedModel& model,
                               const MaxBoostStrategy& strategy, double a,
                               double x, int n, std::uint64_t seed,
                               const EvolveCaps& caps = {});

} // namespace brw
