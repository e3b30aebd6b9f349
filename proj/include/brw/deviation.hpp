#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "brw/model.hpp"
#include "brw/rate.hpp"

namespace brw {

/// Which deviation result applies to a (model, a, x) query.
enum class Regime {
    THM1_L_INF,     // unbounded steps: exponential decay at rate I(a,x)
    THM1_REMARK_I,  // L < inf, no atom at L, some admissible s has y_s/s < L
    THM1_REMARK_II, // L < inf, atom at L, some admissible s has y_s/s <= L
    THM2_I,         // x* = L: double-exponential decay
    THM2_II,        // y_s/s > L for every admissible s: double-exponential
    BOUNDARY_OPEN,  // inf_s y_s/s = L with no atom at L: decay scale unresolved
    A_GE_LOGM,      // a >= log m: double-exponential via alpha
};

std::string regime_name(Regime r);

struct DeviationResult {
    enum class Kind { EXPONENTIAL, DOUBLE_EXP, PARETO } kind;

    // EXPONENTIAL
    double I_ax = 0.0;
    double s_star = 0.0;
    double y_star = 0.0;

    // DOUBLE_EXP: bounds on liminf/limsup of (1/n) log[-log P]
    double lower_exponent = 0.0;
    double upper_exponent = 0.0;
    bool lower_is_positivity_flag = false; // lower bound proven positive, no value

    // PARETO: bounds on (1/n) log P
    double lower_rate = 0.0;
    double upper_rate = 0.0;

    std::map<std::string, double> diagnostics;
};

// Unique y in (0, x] with log m - I((x-y)/(1-s)) = a/(1-s), for admissible s.
double solve_ys(const CheckedModel& model, double a, double x, double s);

// inf_{s in (0, 1 - a/log m]} y_s / s (grid scan + golden refinement)
double inf_ys_over_s(const CheckedModel& model, double a, double x,
                     int grid_points = 512);

Regime classify_regime(const CheckedModel& model, double a, double x,
                       int grid_points = 512);

// Upper-deviation rate I(a,x) = inf_s { s I(y_s/s) - s log m } with minimizer.
DeviationResult rate_Iax(const CheckedModel& model, double a, double x);

// Unique root c* in (0, x/L) of
//   log m - I(L + (x-L)/(1-c)) - (a - log b)/(1-c) = log b.
double cstar(const CheckedModel& model, double a, double x);

// helper exposed for tests: the u(c) of the c* equation
double cstar_objective(const CheckedModel& model, double a, double x, double c);

// Double-exponential exponent bounds for THM2_* or a >= log m regimes.
DeviationResult double_exp_bounds(const CheckedModel& model, double a, double x);

// Pareto offspring tail bounds (standard normal steps, I(x) = x^2/2).
DeviationResult pareto_bounds(double m, double beta, double a, double x);

enum class Strategy { B_ARY, ALPHA_ARY };

struct StrategyParams {
    std::uint64_t horizon = 0; // t_n for B_ARY, n for ALPHA_ARY
    double eta = 0.0;          // displacement slack for B_ARY
    double x = 0.0;            // step threshold for ALPHA_ARY
    double a = 0.0;            // exponent target selecting alpha (ALPHA_ARY)
};

// Exact log-probability of the forced prefix of a lower-bound strategy.
double strategy_log_prob(const CheckedModel& model, Strategy strategy,
                         const StrategyParams& params);

// The epsilon-perturbed supremum L_eps of the path-optimization; L_0 = -I(a,x).
double epsilon_perturbed_supremum(const CheckedModel& model, double a, double x,
                                  double eps);

} // namespace brw
