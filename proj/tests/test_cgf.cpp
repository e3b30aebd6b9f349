#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "brw/cgf.hpp"
#include "brw/errors.hpp"
#include "brw/rng.hpp"

using namespace brw;

TEST_CASE("closed-form values") {
    CHECK(cgf(StepLaw::normal(1.0), 2.0) == doctest::Approx(2.0));
    CHECK(cgf(StepLaw::rademacher(), 0.0) == 0.0);
    CHECK(cgf(StepLaw::uniform(1.0), 0.0) == 0.0);
    CHECK(cgf(StepLaw::rademacher(), 1.0) ==
          doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-12));
}

TEST_CASE("classification of the three cases") {
    CgfProfile normal = classify_cgf(StepLaw::normal(1.0));
    CHECK(normal.case_id == 1);
    CHECK(std::isinf(normal.lambda_star));

    CgfProfile rad = classify_cgf(StepLaw::rademacher());
    CHECK(rad.case_id == 2);
    CHECK(rad.L == doctest::Approx(1.0));
    CHECK(rad.mass_at_L == doctest::Approx(0.5));

    CgfProfile tilt = classify_cgf(StepLaw::tilted_polynomial_density());
    CHECK(tilt.case_id == 3);
    CHECK(tilt.lambda_star == doctest::Approx(1.0));
    // T = Lambda'(1) = E_2(0)/E_3(0) - E[Y] = 2 - E_2(1)/E_3(1)
    CHECK(tilt.T == doctest::Approx(0.646249943642598).epsilon(1e-9));

    CgfProfile uni = classify_cgf(StepLaw::uniform(1.0));
    CHECK(uni.case_id == 2);
    CHECK(uni.L == doctest::Approx(1.0));
    CHECK(uni.mass_at_L == 0.0);
}

TEST_CASE("domain boundary of the tilted density") {
    StepLaw tilt = StepLaw::tilted_polynomial_density();
    CHECK(std::isfinite(cgf(tilt, 1.0)));
    CHECK_THROWS_AS(cgf(tilt, 1.5), DomainExceeded);
    CHECK_THROWS_AS(cgf(tilt, -0.1), DomainExceeded);
}

namespace {

std::vector<StepLaw> all_variants() {
    return {StepLaw::normal(1.0),
            StepLaw::normal(0.5),
            StepLaw::rademacher(),
            StepLaw::two_point(-2.0, 0.5, 0.7),
            StepLaw::uniform(1.0),
            StepLaw::uniform(0.25),
            StepLaw::lattice({{-1.0, 0.25}, {0.0, 0.5}, {2.0, 0.25}}),
            StepLaw::tilted_polynomial_density()};
}

double lambda_cap(const StepLaw& s) {
    return std::isinf(s.lambda_star()) ? 6.0 : s.lambda_star();
}

} // namespace

TEST_CASE("convexity of Lambda on random pairs") {
    RngStream rng(11, 0);
    for (const StepLaw& s : all_variants()) {
        double cap = lambda_cap(s);
        for (int i = 0; i < 200; ++i) {
            double l1 = rng.uniform(0.0, cap);
            double l2 = rng.uniform(0.0, cap);
            double t = rng.uniform();
            double mid = cgf(s, t * l1 + (1.0 - t) * l2);
            CHECK(mid <= t * cgf(s, l1) + (1.0 - t) * cgf(s, l2) + 1e-10);
        }
    }
}

TEST_CASE("Lambda'(0) = 0 and matches a central difference") {
    for (const StepLaw& s : all_variants()) {
        CHECK(std::abs(cgf_prime(s, 0.0)) < 1e-8);
        double cap = lambda_cap(s);
        for (double l : {0.1 * cap, 0.45 * cap, 0.8 * cap}) {
            double h = 1e-6;
            double fd = (cgf(s, l + h) - cgf(s, l - h)) / (2.0 * h);
            CHECK(cgf_prime(s, l) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("Lambda' nondecreasing on a grid") {
    for (const StepLaw& s : all_variants()) {
        double cap = lambda_cap(s);
        double prev = cgf_prime(s, 0.0);
        for (int i = 1; i <= 50; ++i) {
            double cur = cgf_prime(s, cap * i / 50.0);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}
