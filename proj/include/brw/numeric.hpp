#pragma once

#include <functional>

namespace brw::numeric {

// Adaptive Simpson quadrature on [a, b] with absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13, int max_depth = 60);

// Generalized exponential integral E_n(t) = \int_1^inf e^{-t y} y^{-n} dy
// for n in {1, 2, 3} and t >= 0 (n = 1 requires t > 0).
double expint_en(int n, double t);

// Tail integral \int_z^inf e^{-y} y^{-3} dy for z >= 1.
double exp_poly3_tail(double z);

// Standard normal upper tail P(N(0,1) >= z).
double normal_upper_tail(double z);

// Standard normal quantile: z with P(N(0,1) <= z) = p, p in (0, 1).
double normal_quantile(double p);

// Bisection root of f on [lo, hi] with f(lo), f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-14, int max_iter = 200);

// Minimize a 1-d function by golden-section search on [lo, hi].
double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double xtol = 1e-12, int max_iter = 300);

} // namespace brw::numeric
