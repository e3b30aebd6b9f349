#include "brw/numeric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace brw::numeric {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    return adaptive(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double expint_en(int n, double t) {
    if (t < 0.0) throw std::invalid_argument("expint_en: t < 0");
    if (n == 1) {
        if (t <= 0.0) throw std::invalid_argument("expint_en: E_1(0) diverges");
        return -std::expint(-t);
    }
    if (t == 0.0) return 1.0 / static_cast<double>(n - 1);
    // recurrence E_{k+1}(t) = (e^{-t} - t E_k(t)) / k; stable for t <= ~2,
    // beyond that fall back to direct quadrature to avoid cancellation
    if (t <= 2.0) {
        double e = std::exp(-t);
        double ek = -std::expint(-t); // E_1
        for (int k = 1; k < n; ++k) ek = (e - t * ek) / static_cast<double>(k);
        return ek;
    }
    // integrand e^{-t y} y^{-n}; substitute y = 1 + u/t so the decay scale is O(1)
    auto g = [n, t](double u) {
        double y = 1.0 + u / t;
        return std::exp(-t - u) / std::pow(y, n) / t;
    };
    return integrate(g, 0.0, 60.0, 1e-18 * std::exp(-t));
}

double exp_poly3_tail(double z) {
    if (z < 1.0) throw std::invalid_argument("exp_poly3_tail: z < 1");
    // substitute u = y - z so the decay scale is O(1) regardless of z
    auto g = [z](double u) {
        double y = z + u;
        return std::exp(-y) / (y * y * y);
    };
    return integrate(g, 0.0, 60.0, 1e-16 * std::exp(-z));
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p outside (0,1)");
    // Acklam's rational approximation, polished with one Halley step
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double q, r, x;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // one Halley refinement against erfc
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("bisect: endpoints do not bracket a root");
    for (int i = 0; i < max_iter && hi - lo > xtol * (1.0 + std::abs(lo)); ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double xtol, int max_iter) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < max_iter && (b - a) > xtol * (1.0 + std::abs(a)); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

} // namespace brw::numeric
