#include "brw/cgf.hpp"

#include <cmath>
#include <limits>

namespace brw {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceThreshold = 1e8;
} // namespace

double cgf(const StepLaw& step, double lambda) { return step.cgf(lambda); }

double cgf_prime(const StepLaw& step, double lambda) {
    return step.cgf_prime(lambda);
}

CgfProfile classify_cgf(const StepLaw& step) {
    CgfProfile profile;
    profile.lambda_star = step.lambda_star();
    profile.L = step.ess_sup();
    profile.mass_at_L = step.mass_at_sup();

    // evaluate Lambda' on a geometric grid approaching lambda*
    double limit;
    if (std::isinf(profile.lambda_star)) {
        double lam = 1.0, last = step.cgf_prime(1.0);
        for (int i = 0; i < 64; ++i) {
            lam *= 2.0;
            double d = step.cgf_prime(lam);
            if (d > kDivergenceThreshold) {
                profile.case_id = 1;
                return profile;
            }
            last = d;
        }
        limit = last;
    } else {
        double last = 0.0;
        for (int i = 4; i <= 48; ++i) {
            double lam = profile.lambda_star * (1.0 - std::pow(2.0, -i));
            last = step.cgf_prime(lam);
            if (last > kDivergenceThreshold) {
                profile.case_id = 1;
                return profile;
            }
        }
        limit = last;
    }

    if (std::isinf(profile.lambda_star)) {
        profile.case_id = 2;
        profile.L = limit; // the grid limit is L itself; keep the analytic value
        if (std::isfinite(step.ess_sup())) profile.L = step.ess_sup();
    } else {
        profile.case_id = 3;
        // Lambda' is continuous up to lambda* in case III
        profile.T = step.cgf_prime(profile.lambda_star);
    }
    return profile;
}

} // namespace brw
