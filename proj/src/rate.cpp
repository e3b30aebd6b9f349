#include "brw/rate.hpp"

#include <cmath>
#include <limits>

#include "brw/errors.hpp"
#include "brw/numeric.hpp"

namespace brw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solve Lambda'(t) = x on (0, hi] by safeguarded Newton (numeric second
// derivative, bisection fallback); Lambda' is nondecreasing.
double solve_stationary(const StepLaw& step, double x, double lo, double hi) {
    double flo = step.cgf_prime(lo) - x;
    double fhi = step.cgf_prime(hi) - x;
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        double f = step.cgf_prime(t) - x;
        if (f > 0.0)
            hi = t;
        else
            lo = t;
        double h = 1e-7 * (1.0 + std::abs(t));
        double d = (step.cgf_prime(std::min(t + h, hi)) -
                    step.cgf_prime(std::max(t - h, lo))) /
                   (std::min(t + h, hi) - std::max(t - h, lo));
        double t_next = d > 0.0 ? t - f / d : 0.5 * (lo + hi);
        if (!(t_next > lo && t_next < hi)) t_next = 0.5 * (lo + hi);
        if (std::abs(t_next - t) <= 1e-12 * (1.0 + std::abs(t))) return t_next;
        t = t_next;
    }
    return t;
}

} // namespace

double rate_I(const StepLaw& step, const CgfProfile& profile, double x) {
    if (x < 0.0) throw OutOfRange("rate_I requires x >= 0");
    if (x == 0.0) return 0.0;
    if (profile.case_id == 2) {
        double tol = 1e-12 * (1.0 + std::abs(profile.L));
        if (x > profile.L + tol)
            return kInf;
        if (x >= profile.L - tol)
            return profile.mass_at_L > 0.0 ? -std::log(profile.mass_at_L) : kInf;
    }
    if (profile.case_id == 3 && x >= profile.T) {
        return profile.lambda_star * x - step.cgf(profile.lambda_star);
    }
    if (step.kind() == StepLaw::Kind::Normal) {
        double sigma = step.param();
        return 0.5 * x * x / (sigma * sigma); // stationary point t = x / sigma^2
    }
    // interior: a stationary point t with Lambda'(t) = x exists
    double cap = std::isinf(profile.lambda_star) ? kInf : profile.lambda_star;
    double hi = 1.0;
    while (hi < cap && step.cgf_prime(std::min(hi, cap)) < x) {
        hi *= 2.0;
        if (hi > 1e18) break;
    }
    hi = std::min(hi, cap);
    double t = solve_stationary(step, x, 0.0, hi);
    return t * x - step.cgf(t);
}

double rate_I(const StepLaw& step, double x) {
    return rate_I(step, classify_cgf(step), x);
}

double inverse_rate(const StepLaw& step, const CgfProfile& profile,
                    double target, double hi) {
    if (target <= 0.0) return 0.0;
    auto f = [&](double y) { return rate_I(step, profile, y) - target; };
    if (f(hi) <= 0.0) return hi;
    return numeric::bisect(f, 0.0, hi, 1e-14);
}

RateProfile make_rate_profile(const CheckedModel& model) {
    RateProfile r;
    r.cgf = classify_cgf(model.step());
    r.kappa = r.cgf.case_id == 2 ? kInf : r.cgf.lambda_star;
    if (r.cgf.case_id == 2)
        r.I_at_L = r.cgf.mass_at_L > 0.0 ? -std::log(r.cgf.mass_at_L) : kInf;
    r.x_star = speed_xstar(model);
    return r;
}

double speed_xstar(const CheckedModel& model) {
    CgfProfile profile = classify_cgf(model.step());
    double log_m = model.log_m();
    if (profile.case_id == 2) {
        double I_at_L =
            profile.mass_at_L > 0.0 ? -std::log(profile.mass_at_L) : kInf;
        if (I_at_L <= log_m) return profile.L;
        auto f = [&](double y) { return rate_I(model.step(), profile, y) - log_m; };
        return numeric::bisect(f, 0.0, profile.L, 1e-15);
    }
    double hi = 1.0;
    while (rate_I(model.step(), profile, hi) <= log_m) hi *= 2.0;
    auto f = [&](double y) { return rate_I(model.step(), profile, y) - log_m; };
    return numeric::bisect(f, 0.0, hi, 1e-15);
}

double biggins_growth(const CheckedModel& model, double x) {
    if (x <= 0.0) return model.log_m();
    double xs = speed_xstar(model);
    if (std::abs(x - xs) <= 1e-12 * (1.0 + xs))
        throw BoundaryPoint("x = x*");
    if (x > xs) return 0.0;
    return model.log_m() - rate_I(model.step(), x);
}

} // namespace brw
