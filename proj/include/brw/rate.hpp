#pragma once

#include "brw/cgf.hpp"
#include "brw/model.hpp"

namespace brw {

/// Rate function profile: the CGF classification plus the derived speed x*,
/// the asymptotic slope kappa = lim I(t)/t, and I at L (case II only).
struct RateProfile {
    CgfProfile cgf;
    double x_star = 0.0;
    double kappa = 0.0;  // lambda* in cases I/III, +inf in case II
    double I_at_L = 0.0; // case II: -log P(X=L), +inf when the mass vanishes
};

// Legendre-Fenchel transform I(x) = sup_{t>=0} { t x - Lambda(t) }, extended
// real valued: +inf exactly in case II for x > L.
double rate_I(const StepLaw& step, double x);
double rate_I(const StepLaw& step, const CgfProfile& profile, double x);

// inverse of I on [0, hi]: the x with I(x) = target (I strictly increasing)
double inverse_rate(const StepLaw& step, const CgfProfile& profile,
                    double target, double hi);

RateProfile make_rate_profile(const CheckedModel& model);

// speed of the maximal position: sup{ y >= 0 : I(y) <= log m }, capped at L
double speed_xstar(const CheckedModel& model);

// a.s. growth exponent of Z_n[xn, inf): log m for x <= 0, log m - I(x) on
// (0, x*), 0 beyond x*; the boundary x = x* itself is refused
double biggins_growth(const CheckedModel& model, double x);

} // namespace brw
