#include "brw/deviation.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "brw/errors.hpp"
#include "brw/numeric.hpp"

namespace brw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSmin = 1e-6;           // lower end of the s grid
constexpr double kRatioAsymptote = 1e6;  // switch to the kappa-slope form

struct QueryContext {
    const CheckedModel& model;
    CgfProfile profile;
    double log_m;
    double I_x;
    double s_max; // 1 - a / log m

    QueryContext(const CheckedModel& m, double a, double x)
        : model(m), profile(classify_cgf(m.step())), log_m(m.log_m()) {
        I_x = rate_I(m.step(), profile, x);
        s_max = 1.0 - a / log_m;
    }
};

void check_query(const QueryContext& ctx, double a, double x) {
    double floor_a = std::max(0.0, ctx.log_m - ctx.I_x);
    if (!(a > floor_a))
        throw OutOfRange("a must exceed (log m - I(x))^+");
    if (!(a < ctx.log_m)) throw OutOfRange("a must be below log m");
    if (!(x > 0.0) || !(x < ctx.profile.L))
        throw OutOfRange("x must lie in (0, L)");
}

double solve_ys_impl(const QueryContext& ctx, double a, double x, double s) {
    if (!(s > 0.0)) throw OutOfRange("s must be positive");
    if (s > ctx.s_max + 1e-14)
        throw NoSolution("s > 1 - a/log m: constraint has no root");
    s = std::min(s, ctx.s_max);
    double target = ctx.log_m - a / (1.0 - s); // I(xbar), >= 0 for admissible s
    double xbar = inverse_rate(ctx.model.step(), ctx.profile, target, x);
    return x - (1.0 - s) * xbar;
}

// s I(y_s/s) - s log m, extended-real valued
double objective(const QueryContext& ctx, double a, double x, double s) {
    double y = solve_ys_impl(ctx, a, x, s);
    double ratio = y / s;
    const CgfProfile& p = ctx.profile;
    if (p.case_id == 2) {
        double tol = 1e-12 * (1.0 + p.L);
        if (ratio > p.L + tol) return kInf;
        return s * rate_I(ctx.model.step(), p, std::min(ratio, p.L)) -
               s * ctx.log_m;
    }
    if (ratio > kRatioAsymptote) {
        double kappa = p.lambda_star; // cases I and III
        if (std::isinf(kappa)) return kInf;
        return kappa * y - s * ctx.log_m;
    }
    return s * rate_I(ctx.model.step(), p, ratio) - s * ctx.log_m;
}

// minimize f over (s_lo, s_hi] : log-uniform grid seed + golden refinement
double grid_golden_min(const std::function<double(double)>& f, double s_lo,
                       double s_hi, int grid_points, double* arg_out) {
    double best = kInf, best_s = s_hi;
    double log_lo = std::log(s_lo), log_hi = std::log(s_hi);
    int n = grid_points;
    std::vector<double> ss(n);
    for (int i = 0; i < n; ++i)
        ss[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    ss[n - 1] = s_hi;
    int best_i = n - 1;
    for (int i = 0; i < n; ++i) {
        double v = f(ss[i]);
        if (v < best) {
            best = v;
            best_s = ss[i];
            best_i = i;
        }
    }
    double lo = ss[std::max(0, best_i - 1)];
    double hi = ss[std::min(n - 1, best_i + 1)];
    double s_ref = numeric::golden_minimize(f, lo, hi, 1e-10);
    double v_ref = f(s_ref);
    if (v_ref < best) {
        best = v_ref;
        best_s = s_ref;
    }
    if (arg_out) *arg_out = best_s;
    return best;
}

} // namespace

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::THM1_L_INF: return "THM1_L_INF";
        case Regime::THM1_REMARK_I: return "THM1_REMARK_I";
        case Regime::THM1_REMARK_II: return "THM1_REMARK_II";
        case Regime::THM2_I: return "THM2_I";
        case Regime::THM2_II: return "THM2_II";
        case Regime::BOUNDARY_OPEN: return "BOUNDARY_OPEN";
        case Regime::A_GE_LOGM: return "A_GE_LOGM";
    }
    return "?";
}

double solve_ys(const CheckedModel& model, double a, double x, double s) {
    QueryContext ctx(model, a, x);
    check_query(ctx, a, x);
    return solve_ys_impl(ctx, a, x, s);
}

double inf_ys_over_s(const CheckedModel& model, double a, double x,
                     int grid_points) {
    QueryContext ctx(model, a, x);
    check_query(ctx, a, x);
    auto h = [&](double s) { return solve_ys_impl(ctx, a, x, s) / s; };
    return grid_golden_min(h, kSmin, ctx.s_max, grid_points, nullptr);
}

Regime classify_regime(const CheckedModel& model, double a, double x,
                       int grid_points) {
    QueryContext ctx(model, a, x);
    if (a >= ctx.log_m) return Regime::A_GE_LOGM;
    check_query(ctx, a, x);
    if (std::isinf(ctx.profile.L)) return Regime::THM1_L_INF;

    double L = ctx.profile.L;
    double xs = speed_xstar(model);
    if (std::abs(xs - L) <= 1e-12 * (1.0 + L)) return Regime::THM2_I;

    double r = inf_ys_over_s(model, a, x, grid_points);
    double band = 1e-6 * (1.0 + L);
    if (ctx.profile.mass_at_L > 0.0)
        return r <= L + 1e-9 * (1.0 + L) ? Regime::THM1_REMARK_II : Regime::THM2_II;
    if (r < L - band) return Regime::THM1_REMARK_I;
    if (std::abs(r - L) <= band) return Regime::BOUNDARY_OPEN;
    return Regime::THM2_II;
}

DeviationResult rate_Iax(const CheckedModel& model, double a, double x) {
    Regime regime = classify_regime(model, a, x);
    if (regime != Regime::THM1_L_INF && regime != Regime::THM1_REMARK_I &&
        regime != Regime::THM1_REMARK_II)
        throw WrongRegime("rate_Iax requires an exponential-decay regime, got " +
                          regime_name(regime));

    QueryContext ctx(model, a, x);
    auto f = [&](double s) { return objective(ctx, a, x, s); };
    double s_star = ctx.s_max;
    double value = grid_golden_min(f, kSmin, ctx.s_max, 512, &s_star);

    DeviationResult res;
    res.kind = DeviationResult::Kind::EXPONENTIAL;
    res.I_ax = value;
    res.s_star = s_star;
    res.y_star = solve_ys_impl(ctx, a, x, s_star);
    res.diagnostics["s_max"] = ctx.s_max;
    res.diagnostics["I_x"] = ctx.I_x;
    res.diagnostics["constraint_residual"] =
        ctx.log_m - rate_I(model.step(), ctx.profile,
                           (x - res.y_star) / (1.0 - s_star)) -
        a / (1.0 - s_star);
    if (!(value > 0.0) || !std::isfinite(value))
        throw WrongRegime("I(a,x) not in (0, inf); optimizer value " +
                          std::to_string(value));
    return res;
}

double cstar_objective(const CheckedModel& model, double a, double x, double c) {
    double L = model.L();
    double log_b = std::log(static_cast<double>(model.b()));
    double arg = L + (x - L) / (1.0 - c);
    arg = std::max(arg, 0.0);
    return model.log_m() - rate_I(model.step(), arg) - (a - log_b) / (1.0 - c);
}

double cstar(const CheckedModel& model, double a, double x) {
    Regime regime = classify_regime(model, a, x);
    if (regime != Regime::THM2_I && regime != Regime::THM2_II)
        throw WrongRegime("cstar requires a double-exponential regime, got " +
                          regime_name(regime));
    double L = model.L();
    if (std::isinf(L)) throw WrongRegime("cstar requires L < inf");
    double log_b = std::log(static_cast<double>(model.b()));
    double hi = x / L;
    auto u = [&](double c) { return cstar_objective(model, a, x, c); };
    if (!(u(0.0) < log_b) || !(u(hi) > log_b))
        throw WrongRegime("u does not bracket log b on [0, x/L]");
    double c = numeric::bisect([&](double v) { return u(v) - log_b; }, 0.0, hi,
                               1e-15);
    return c;
}

DeviationResult double_exp_bounds(const CheckedModel& model, double a, double x) {
    DeviationResult res;
    res.kind = DeviationResult::Kind::DOUBLE_EXP;
    double log_m = model.log_m();

    if (a >= log_m) {
        // offspring must be genuinely random
        for (const auto& [k, p] : model.offspring().support())
            if (k >= 2 && p >= 1.0 - 1e-15)
                throw WrongRegime("deterministic branching: p_k = 1 for k >= 2");
        double log_mu = std::log(model.mu());
        if (a > log_mu + 1e-12) throw OutOfRange("a > log mu");
        double alpha = offspring_alpha(model.offspring(), a);
        if (std::isinf(alpha)) throw OutOfRange("no support point >= e^a");
        res.lower_exponent = a - log_m;
        res.upper_exponent = std::log(alpha);
        res.diagnostics["alpha"] = alpha;
        if (a <= log_m + 1e-12 && std::isfinite(model.L())) {
            // degenerate lower bound is still strictly positive when L < inf
            res.lower_is_positivity_flag = true;
        }
        return res;
    }

    Regime regime = classify_regime(model, a, x);
    if (regime != Regime::THM2_I && regime != Regime::THM2_II)
        throw WrongRegime("double_exp_bounds requires THM2 regime or a >= log m");
    double c = cstar(model, a, x);
    res.lower_exponent = 0.0;
    res.lower_is_positivity_flag = true; // proven positive, value unquantified
    res.upper_exponent = c * std::log(static_cast<double>(model.b()));
    res.diagnostics["c_star"] = c;
    return res;
}

DeviationResult pareto_bounds(double m, double beta, double a, double x) {
    if (!(m > 1.0)) throw OutOfRange("pareto_bounds requires m > 1");
    if (!(beta > 1.0)) throw OutOfRange("pareto_bounds requires beta > 1");
    double typical = std::log(m) - 0.5 * x * x;
    if (!(a > std::max(0.0, typical)))
        throw OutOfRange("a must exceed (log m - x^2/2)^+");
    DeviationResult res;
    res.kind = DeviationResult::Kind::PARETO;
    res.upper_rate = -(a - typical);
    res.lower_rate = -((beta - 1.0) * a + a - typical);
    res.diagnostics["typical_exponent"] = typical;
    return res;
}

namespace {

// sum_{i=i0}^{i1} base^i, exact in 128-bit integer while it fits
long double geometric_sum(std::uint64_t base, std::uint64_t i0, std::uint64_t i1) {
    if (i1 < i0) return 0.0L;
    unsigned __int128 acc = 0, term = 1;
    bool overflow = false;
    for (std::uint64_t i = 0; i <= i1; ++i) {
        if (i >= i0) {
            unsigned __int128 next = acc + term;
            if (next < acc) {
                overflow = true;
                break;
            }
            acc = next;
        }
        unsigned __int128 t2 = term * base;
        if (i < i1 && t2 / base != term) {
            overflow = true;
            break;
        }
        term = t2;
    }
    if (!overflow) return static_cast<long double>(acc);
    // log-domain closed form (base^{i1+1} - base^{i0}) / (base - 1)
    long double lb = std::log(static_cast<long double>(base));
    long double hi = std::exp(static_cast<long double>(i1 + 1) * lb);
    long double lo = std::exp(static_cast<long double>(i0) * lb);
    return (hi - lo) / static_cast<long double>(base - 1);
}

} // namespace

double strategy_log_prob(const CheckedModel& model, Strategy strategy,
                         const StrategyParams& params) {
    if (strategy == Strategy::B_ARY) {
        std::uint64_t b = model.b();
        double p_b = model.offspring().prob(b);
        if (!(p_b > 0.0)) throw ZeroProbability("p_b = 0");
        double L = model.L();
        if (std::isinf(L)) throw OutOfRange("B_ARY requires L < inf");
        double r = model.step().tail_prob(L - params.eta);
        if (!(r > 0.0)) throw ZeroProbability("P(X >= L - eta) = 0");
        std::uint64_t t = params.horizon;
        long double births = geometric_sum(b, 0, t == 0 ? 0 : t - 1);
        if (t == 0) births = 0.0L;
        long double moves = geometric_sum(b, 1, t);
        long double v = births * static_cast<long double>(std::log(p_b)) +
                        moves * static_cast<long double>(std::log(r));
        return static_cast<double>(v);
    }
    // ALPHA_ARY: all of generations 1..n forced to alpha-ary splitting with
    // every displacement at least x
    double alpha_d = offspring_alpha(model.offspring(), params.a);
    if (std::isinf(alpha_d)) throw OutOfRange("no support point >= e^a");
    auto alpha = static_cast<std::uint64_t>(alpha_d);
    double p_alpha = model.offspring().prob(alpha);
    if (!(p_alpha > 0.0)) throw ZeroProbability("p_alpha = 0");
    double q = model.step().tail_prob(params.x);
    if (!(q > 0.0)) throw ZeroProbability("P(X >= x) = 0");
    std::uint64_t n = params.horizon;
    if (n == 0) return 0.0;
    long double births = geometric_sum(alpha, 0, n - 1);
    long double moves = geometric_sum(alpha, 1, n);
    long double v = births * static_cast<long double>(std::log(p_alpha)) +
                    moves * static_cast<long double>(std::log(q));
    return static_cast<double>(v);
}

double epsilon_perturbed_supremum(const CheckedModel& model, double a, double x,
                                  double eps) {
    QueryContext ctx(model, a, x);
    check_query(ctx, a, x);
    double log_m = ctx.log_m;
    double s_max = 1.0 - (a - eps) / log_m;
    const CgfProfile& p = ctx.profile;
    double hi_inv = p.case_id == 2 ? p.L : std::max(x, speed_xstar(model)) + 1.0;

    auto g = [&](double s) {
        double target = log_m - (a - eps) / (1.0 - s);
        if (target < 0.0) return -kInf;
        double wbar = inverse_rate(model.step(), p, target, hi_inv);
        double y = x - eps - (1.0 - s) * (wbar + eps);
        double arg = std::max(y / s - eps, 0.0);
        double I_val;
        if (p.case_id == 2 && arg > p.L)
            I_val = kInf;
        else if (arg > kRatioAsymptote && std::isinf(p.lambda_star))
            I_val = kInf;
        else
            I_val = rate_I(model.step(), p, std::min(arg, p.case_id == 2 ? p.L : arg));
        return s * log_m - s * I_val;
    };
    // maximize = minimize the negation
    auto f = [&](double s) { return -g(s); };
    double best = grid_golden_min(f, kSmin, s_max, 512, nullptr);
    return -best;
}

} // namespace brw
