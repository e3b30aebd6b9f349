#pragma once

#include <cstdint>
#include <vector>

#include "brw/model.hpp"

namespace brw {

/// Exact law of the level count Z_n[y, inf) for a tiny lattice model.
struct CountDistribution {
    double level = 0.0;
    int horizon = 0;
    std::vector<double> pmf; // index k -> P(count = k)
};

struct OracleLimits {
    int n_max = 5;
    std::size_t max_step_atoms = 8;
    std::uint64_t max_offspring = 4;
    std::size_t max_state_entries = 100'000'000;
};

// Exact level-set count distribution by dynamic programming over the
// offspring-mixture / step-shift recursion. Requires lattice steps and
// finite offspring support within the limits.
CountDistribution exact_level_dist(const CheckedModel& model, int n, double y,
                                   const OracleLimits& limits = {});

// Exact Galton-Watson population law (counts only; no positions).
CountDistribution exact_population_dist(const CheckedModel& model, int n,
                                        const OracleLimits& limits = {});

// Exact P(Z_n[xn, inf) >= ceil(e^{an})).
double exact_upper_dev(const CheckedModel& model, double a, double x, int n,
                       const OracleLimits& limits = {});

// Dense-grid Legendre transform: max over a lambda grid of t x - Lambda(t).
double grid_legendre(const StepLaw& step, double x, double lambda_hi,
                     std::size_t points);

struct GridInfimum {
    bool feasible = false;
    double value = 0.0;
    double s = 0.0;
    double y = 0.0;
};

// Brute-force infimum of s I(y/s) - s log m over an (s, y) grid subject to
// log m - I((x-y)/(1-s)) >= a/(1-s).
GridInfimum grid_infimum_Iax(const CheckedModel& model, double a, double x,
                             std::size_t s_points, std::size_t y_points);

} // namespace brw
