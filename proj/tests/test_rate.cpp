#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "brw/errors.hpp"
#include "brw/rate.hpp"

using namespace brw;

namespace {

CheckedModel half_half(StepLaw step) {
    return validate_model(OffspringLaw::finite({{1, 0.5}, {2, 0.5}}),
                          std::move(step));
}

// rate function of the Rademacher step, in closed form
double rad_rate(double y) {
    if (y >= 1.0) return std::log(2.0);
    return 0.5 * ((1.0 + y) * std::log1p(y) + (1.0 - y) * std::log1p(-y));
}

} // namespace

TEST_CASE("rate_I closed forms") {
    CHECK(rate_I(StepLaw::normal(1.0), 1.0) == doctest::Approx(0.5));
    CHECK(rate_I(StepLaw::normal(1.0), 0.0) == 0.0);
    CHECK(rate_I(StepLaw::rademacher(), 0.0) == 0.0);
    CHECK(rate_I(StepLaw::rademacher(), 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::isinf(rate_I(StepLaw::rademacher(), 1.5)));
    for (double y : {0.1, 0.4, 0.7, 0.95})
        CHECK(rate_I(StepLaw::rademacher(), y) ==
              doctest::Approx(rad_rate(y)).epsilon(1e-9));
}

TEST_CASE("case III clamps to the linear branch beyond T") {
    StepLaw tilt = StepLaw::tilted_polynomial_density();
    CgfProfile p = classify_cgf(tilt);
    REQUIRE(p.case_id == 3);
    double linear = p.lambda_star * (p.T + 1.0) - tilt.cgf(p.lambda_star);
    CHECK(rate_I(tilt, p.T + 1.0) == doctest::Approx(linear).epsilon(1e-10));
    // slope is exactly lambda* past T
    double a = rate_I(tilt, p.T + 2.0), b = rate_I(tilt, p.T + 3.0);
    CHECK(b - a == doctest::Approx(p.lambda_star).epsilon(1e-10));
}

TEST_CASE("speed examples") {
    CHECK(speed_xstar(half_half(StepLaw::normal(1.0))) ==
          doctest::Approx(std::sqrt(2.0 * std::log(1.5))).epsilon(1e-9));

    auto m2 = validate_model(OffspringLaw::finite({{2, 1.0}}),
                             StepLaw::rademacher());
    CHECK(speed_xstar(m2) == doctest::Approx(1.0).epsilon(1e-9));

    // independent bisection on the closed-form Rademacher rate
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (rad_rate(mid) < std::log(1.5) ? lo : hi) = mid;
    }
    CHECK(speed_xstar(half_half(StepLaw::rademacher())) ==
          doctest::Approx(lo).epsilon(1e-8));
    CHECK(lo > 0.8);
    CHECK(lo < 0.9);
}

TEST_CASE("biggins trichotomy") {
    auto model = half_half(StepLaw::normal(1.0));
    CHECK(biggins_growth(model, -3.0) == doctest::Approx(std::log(1.5)));
    CHECK(biggins_growth(model, 2.0) == 0.0);
    CHECK(biggins_growth(model, 0.5) ==
          doctest::Approx(std::log(1.5) - 0.125).epsilon(1e-12));
    CHECK_THROWS_AS(biggins_growth(model, speed_xstar(model)), BoundaryPoint);
}

TEST_CASE("I is convex, strictly increasing on [0, L)") {
    for (StepLaw s : {StepLaw::normal(1.0), StepLaw::rademacher(),
                      StepLaw::uniform(1.0),
                      StepLaw::tilted_polynomial_density()}) {
        CgfProfile p = classify_cgf(s);
        double hi = std::isinf(p.L) ? 3.0 : p.L * 0.999;
        double prev = 0.0;
        for (int i = 1; i <= 40; ++i) {
            double x = hi * i / 40.0;
            double v = rate_I(s, p, x);
            CHECK(v > prev);
            prev = v;
        }
        for (int i = 1; i < 20; ++i) {
            double x1 = hi * i / 20.0, x2 = hi * (i > 10 ? 0.3 : 0.9);
            double mid = rate_I(s, p, 0.5 * (x1 + x2));
            CHECK(mid <= 0.5 * rate_I(s, p, x1) + 0.5 * rate_I(s, p, x2) + 1e-9);
        }
    }
}

TEST_CASE("case II limit at L") {
    StepLaw rad = StepLaw::rademacher();
    CgfProfile p = classify_cgf(rad);
    double prev = 0.0;
    for (double x : {0.9, 0.99, 0.999, 0.9999}) {
        double v = rate_I(rad, p, x);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(std::abs(prev - (-std::log(0.5))) < 1e-3);
    CHECK(rate_I(rad, p, 1.0) == doctest::Approx(-std::log(0.5)).epsilon(1e-6));

    // no atom at L: I(L) still finite for uniform, inf beyond
    StepLaw uni = StepLaw::uniform(1.0);
    CgfProfile pu = classify_cgf(uni);
    CHECK(std::isinf(rate_I(uni, pu, 1.0)));
    CHECK(std::isinf(rate_I(uni, pu, 1.2)));
}

TEST_CASE("asymptotic slope of I") {
    // Normal: I(x)/x = x/2 grows without bound (lambda* infinite)
    StepLaw n1 = StepLaw::normal(1.0);
    CHECK(rate_I(n1, 100.0) / 100.0 == doctest::Approx(50.0).epsilon(1e-6));
    CHECK(rate_I(n1, 1000.0) / 1000.0 > rate_I(n1, 100.0) / 100.0);

    // case III: I(x)/x -> lambda* = 1
    StepLaw tilt = StepLaw::tilted_polynomial_density();
    CHECK(rate_I(tilt, 100.0) / 100.0 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rate_I(tilt, 1000.0) / 1000.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("inverse_rate round trip") {
    StepLaw n1 = StepLaw::normal(1.0);
    CgfProfile p = classify_cgf(n1);
    for (double target : {0.01, 0.2, 1.0, 3.0}) {
        double x = inverse_rate(n1, p, target, 10.0);
        CHECK(rate_I(n1, p, x) == doctest::Approx(target).epsilon(1e-9));
    }
    CHECK(inverse_rate(n1, p, 0.0, 10.0) == 0.0);
}

TEST_CASE("rate profile fields") {
    RateProfile r = make_rate_profile(half_half(StepLaw::rademacher()));
    CHECK(std::isinf(r.kappa));
    CHECK(r.I_at_L == doctest::Approx(std::log(2.0)));

    RateProfile rn = make_rate_profile(half_half(StepLaw::normal(1.0)));
    CHECK(std::isinf(rn.kappa));
    CHECK(std::abs(rate_I(StepLaw::normal(1.0), rn.x_star) - std::log(1.5)) <
          1e-8);

    RateProfile rt =
        make_rate_profile(half_half(StepLaw::tilted_polynomial_density()));
    CHECK(rt.kappa == doctest::Approx(1.0));
}
