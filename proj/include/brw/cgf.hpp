#pragma once

#include "brw/model.hpp"

namespace brw {

/// Classification of the step CGF into the three rate-function cases:
///   case I   - Lambda' diverges at lambda*
///   case II  - lambda* = inf, Lambda' converges to the finite essential sup L
///   case III - lambda* < inf, Lambda' converges to a finite limit T
struct CgfProfile {
    int case_id = 0;       // 1, 2 or 3
    double lambda_star = 0.0;
    double L = 0.0;        // essential supremum (may be +inf)
    double T = 0.0;        // finite Lambda' limit at lambda*, case III only
    double mass_at_L = 0.0; // P(X = L), only meaningful when L < inf
};

double cgf(const StepLaw& step, double lambda);
double cgf_prime(const StepLaw& step, double lambda);

CgfProfile classify_cgf(const StepLaw& step);

} // namespace brw
