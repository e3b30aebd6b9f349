#include "brw/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brw/errors.hpp"
#include "brw/numeric.hpp"

namespace brw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{k=K+1}^{inf} k^{-s} by Euler-Maclaurin (s > 1, K large)
double power_tail_sum(double s, std::uint64_t K) {
    double a = static_cast<double>(K + 1);
    return std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) +
           s * std::pow(a, -s - 1.0) / 12.0;
}

// sum_{k=1}^{inf} k^{-s} to ~1e-15 relative
double zeta_sum(double s) {
    const std::uint64_t K = 100000;
    double acc = 0.0;
    for (std::uint64_t k = K; k >= 1; --k) acc += std::pow(static_cast<double>(k), -s);
    return acc + power_tail_sum(s, K);
}

} // namespace

OffspringLaw OffspringLaw::finite(std::vector<std::pair<std::uint64_t, double>> support,
                                  bool declared_zeta_tail) {
    OffspringLaw law;
    law.declared_zeta_ = declared_zeta_tail;
    std::sort(support.begin(), support.end());
    for (const auto& [k, p] : support) {
        if (p < 0.0) throw AssumptionViolated("negative offspring probability");
    }
    law.support_ = std::move(support);
    double total = 0.0, mean = 0.0;
    for (const auto& [k, p] : law.support_) {
        total += p;
        mean += static_cast<double>(k) * p;
    }
    law.total_mass_ = total;
    law.mean_ = mean;
    return law;
}

OffspringLaw OffspringLaw::zeta_tail(double beta) {
    if (!(beta > 1.0)) throw AssumptionViolated("zeta tail requires beta > 1");
    OffspringLaw law;
    law.zeta_ = true;
    law.beta_ = beta;
    law.zeta_norm_ = zeta_sum(beta + 1.0);
    law.mean_ = zeta_sum(beta) / law.zeta_norm_;
    law.total_mass_ = 1.0;
    law.truncation_mass_ = power_tail_sum(beta + 1.0, kZetaSampleCap) / law.zeta_norm_;
    return law;
}

double OffspringLaw::prob(std::uint64_t k) const {
    if (zeta_) {
        if (k == 0) return 0.0;
        return std::pow(static_cast<double>(k), -beta_ - 1.0) / zeta_norm_;
    }
    auto it = std::lower_bound(support_.begin(), support_.end(),
                               std::make_pair(k, -1.0));
    if (it != support_.end() && it->first == k) return it->second;
    return 0.0;
}

std::uint64_t OffspringLaw::min_support_geq_mean() const {
    double inf = min_support_geq(mean_);
    return static_cast<std::uint64_t>(inf);
}

double OffspringLaw::max_support() const {
    if (zeta_) return kInf;
    for (auto it = support_.rbegin(); it != support_.rend(); ++it)
        if (it->second > 0.0) return static_cast<double>(it->first);
    return 0.0;
}

double OffspringLaw::min_support_geq(double threshold) const {
    // absorb floating noise in thresholds like e^{log 2}
    double t = threshold - 1e-9 * (1.0 + std::abs(threshold));
    if (zeta_) {
        double k = std::max(1.0, std::ceil(t));
        return k;
    }
    for (const auto& [k, p] : support_) {
        if (p > 0.0 && static_cast<double>(k) >= t) return static_cast<double>(k);
    }
    return kInf;
}

double OffspringLaw::tail_prob(double y) const {
    if (zeta_) {
        if (y < 1.0) return 1.0;
        std::uint64_t K = static_cast<std::uint64_t>(std::floor(y));
        if (K >= 1000000) return power_tail_sum(beta_ + 1.0, K) / zeta_norm_;
        double head = 0.0;
        for (std::uint64_t k = 1; k <= K; ++k)
            head += std::pow(static_cast<double>(k), -beta_ - 1.0);
        return 1.0 - head / zeta_norm_;
    }
    double acc = 0.0;
    for (const auto& [k, p] : support_)
        if (static_cast<double>(k) > y) acc += p;
    return acc;
}

std::uint64_t OffspringLaw::sample(RngStream& rng) const {
    double u = rng.uniform();
    if (zeta_) {
        double cdf = 0.0;
        for (std::uint64_t k = 1; k <= kZetaSampleCap; ++k) {
            cdf += std::pow(static_cast<double>(k), -beta_ - 1.0) / zeta_norm_;
            if (u <= cdf) return k;
        }
        return kZetaSampleCap;
    }
    double cdf = 0.0;
    for (const auto& [k, p] : support_) {
        cdf += p;
        if (u <= cdf) return k;
    }
    return support_.back().first;
}

// ---------------------------------------------------------------------------

StepLaw StepLaw::normal(double sigma) {
    if (!(sigma > 0.0)) throw AssumptionViolated("normal step requires sigma > 0");
    StepLaw s;
    s.kind_ = Kind::Normal;
    s.param_ = sigma;
    s.lambda_star_ = kInf;
    s.ess_sup_ = kInf;
    s.mass_at_sup_ = 0.0;
    return s;
}

StepLaw StepLaw::two_point(double x1, double x2, double q) {
    if (!(x1 < x2)) throw AssumptionViolated("two-point step requires x1 < x2");
    if (!(q > 0.0 && q < 1.0))
        throw AssumptionViolated("two-point step requires q in (0,1)");
    StepLaw s = lattice({{x1, 1.0 - q}, {x2, q}});
    s.kind_ = Kind::TwoPoint;
    return s;
}

StepLaw StepLaw::uniform(double half_width) {
    if (!(half_width > 0.0))
        throw AssumptionViolated("uniform step requires positive half-width");
    StepLaw s;
    s.kind_ = Kind::Uniform;
    s.param_ = half_width;
    s.lambda_star_ = kInf;
    s.ess_sup_ = half_width;
    s.mass_at_sup_ = 0.0;
    return s;
}

StepLaw StepLaw::lattice(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw AssumptionViolated("lattice step requires atoms");
    std::sort(atoms.begin(), atoms.end());
    double total = 0.0, mean = 0.0;
    for (const auto& [x, p] : atoms) {
        if (p < 0.0) throw AssumptionViolated("negative step probability");
        total += p;
        mean += x * p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw AssumptionViolated("step probabilities must sum to 1");
    StepLaw s;
    s.kind_ = Kind::FiniteLattice;
    s.shift_ = mean;
    for (auto& [x, p] : atoms) x -= mean;
    // merge atoms that collide after centering
    std::vector<std::pair<double, double>> merged;
    for (const auto& [x, p] : atoms) {
        if (!merged.empty() && std::abs(merged.back().first - x) < 1e-15)
            merged.back().second += p;
        else
            merged.emplace_back(x, p);
    }
    s.atoms_ = std::move(merged);
    s.lambda_star_ = kInf;
    s.ess_sup_ = s.atoms_.back().first;
    s.mass_at_sup_ = s.atoms_.back().second;
    return s;
}

StepLaw StepLaw::tilted_polynomial_density() {
    StepLaw s;
    s.kind_ = Kind::TiltedPolynomialDensity;
    double e3 = numeric::expint_en(3, 1.0);
    double e2 = numeric::expint_en(2, 1.0);
    s.tilt_norm_ = 1.0 / e3;
    s.tilt_mean_ = e2 / e3;
    s.shift_ = s.tilt_mean_;
    s.lambda_star_ = 1.0;
    s.ess_sup_ = kInf;
    s.mass_at_sup_ = 0.0;
    return s;
}

std::string StepLaw::kind_name() const {
    switch (kind_) {
        case Kind::Normal: return "normal";
        case Kind::TwoPoint: return "two_point";
        case Kind::Uniform: return "uniform";
        case Kind::FiniteLattice: return "lattice";
        case Kind::TiltedPolynomialDensity: return "tilted_poly";
    }
    return "?";
}

double StepLaw::cgf(double lambda) const {
    if (lambda < 0.0) throw DomainExceeded("lambda < 0");
    if (lambda == 0.0) return 0.0;
    switch (kind_) {
        case Kind::Normal:
            return 0.5 * param_ * param_ * lambda * lambda;
        case Kind::TwoPoint:
        case Kind::FiniteLattice: {
            double mx = -kInf;
            for (const auto& [x, p] : atoms_) mx = std::max(mx, lambda * x);
            double acc = 0.0;
            for (const auto& [x, p] : atoms_) acc += p * std::exp(lambda * x - mx);
            return mx + std::log(acc);
        }
        case Kind::Uniform: {
            double t = param_ * lambda;
            if (t < 1e-2) {
                double t2 = t * t;
                return t2 / 6.0 - t2 * t2 / 180.0 + t2 * t2 * t2 / 2835.0;
            }
            if (t > 30.0) return t - std::log(2.0 * t) + std::log1p(-std::exp(-2.0 * t));
            return std::log(std::sinh(t) / t);
        }
        case Kind::TiltedPolynomialDensity: {
            if (lambda > 1.0 + 1e-14) throw DomainExceeded("lambda > lambda* = 1");
            double l = std::min(lambda, 1.0);
            double e3 = numeric::expint_en(3, 1.0 - l);
            return std::log(e3 * tilt_norm_) - l * tilt_mean_;
        }
    }
    return 0.0;
}

double StepLaw::cgf_prime(double lambda) const {
    if (lambda < 0.0) throw DomainExceeded("lambda < 0");
    switch (kind_) {
        case Kind::Normal:
            return param_ * param_ * lambda;
        case Kind::TwoPoint:
        case Kind::FiniteLattice: {
            double mx = -kInf;
            for (const auto& [x, p] : atoms_) mx = std::max(mx, lambda * x);
            double num = 0.0, den = 0.0;
            for (const auto& [x, p] : atoms_) {
                double w = p * std::exp(lambda * x - mx);
                num += x * w;
                den += w;
            }
            return num / den;
        }
        case Kind::Uniform: {
            double t = param_ * lambda;
            if (t == 0.0) return 0.0;
            if (t < 1e-2) {
                double t2 = t * t;
                return param_ * (t / 3.0 - t * t2 / 45.0 + 2.0 * t * t2 * t2 / 945.0);
            }
            double coth = t > 20.0 ? 1.0 : std::cosh(t) / std::sinh(t);
            return param_ * coth - 1.0 / lambda;
        }
        case Kind::TiltedPolynomialDensity: {
            if (lambda > 1.0 + 1e-14) throw DomainExceeded("lambda > lambda* = 1");
            double l = std::min(lambda, 1.0);
            double t = 1.0 - l;
            return numeric::expint_en(2, t) / numeric::expint_en(3, t) - tilt_mean_;
        }
    }
    return 0.0;
}

double StepLaw::tail_prob(double c) const {
    switch (kind_) {
        case Kind::Normal:
            return numeric::normal_upper_tail(c / param_);
        case Kind::TwoPoint:
        case Kind::FiniteLattice: {
            double acc = 0.0;
            for (const auto& [x, p] : atoms_)
                if (x >= c - 1e-12 * (1.0 + std::abs(c))) acc += p;
            return acc;
        }
        case Kind::Uniform: {
            if (c <= -param_) return 1.0;
            if (c >= param_) return 0.0;
            return (param_ - c) / (2.0 * param_);
        }
        case Kind::TiltedPolynomialDensity: {
            double z = c + tilt_mean_;
            if (z <= 1.0) return 1.0;
            return tilt_norm_ * numeric::exp_poly3_tail(z);
        }
    }
    return 0.0;
}

double StepLaw::sample(RngStream& rng) const {
    switch (kind_) {
        case Kind::Normal:
            return param_ * rng.normal();
        case Kind::TwoPoint:
        case Kind::FiniteLattice: {
            double u = rng.uniform();
            double cdf = 0.0;
            for (const auto& [x, p] : atoms_) {
                cdf += p;
                if (u <= cdf) return x;
            }
            return atoms_.back().first;
        }
        case Kind::Uniform:
            return rng.uniform(-param_, param_);
        case Kind::TiltedPolynomialDensity: {
            for (;;) {
                double y = 1.0 + rng.exponential();
                if (rng.uniform() <= 1.0 / (y * y * y)) return y - tilt_mean_;
            }
        }
    }
    return 0.0;
}

double StepLaw::sample_tail(double c, RngStream& rng) const {
    double accept = tail_prob(c);
    if (accept <= 0.0) throw ZeroProbability("P(X >= c) = 0");
    switch (kind_) {
        case Kind::Normal: {
            if (accept >= 1e-3) {
                for (;;) {
                    double x = sample(rng);
                    if (x >= c) return x;
                }
            }
            // inverse transform on the conditioned upper tail
            double p_lo = 1.0 - accept;
            double p = p_lo + rng.uniform() * accept;
            return param_ * numeric::normal_quantile(std::min(p, 1.0 - 1e-17));
        }
        case Kind::TwoPoint:
        case Kind::FiniteLattice: {
            double u = rng.uniform() * accept;
            double cdf = 0.0;
            for (const auto& [x, p] : atoms_) {
                if (x < c - 1e-12 * (1.0 + std::abs(c))) continue;
                cdf += p;
                if (u <= cdf) return x;
            }
            return atoms_.back().first;
        }
        case Kind::Uniform: {
            double lo = std::max(-param_, c);
            return rng.uniform(lo, param_);
        }
        case Kind::TiltedPolynomialDensity: {
            double z = std::max(1.0, c + tilt_mean_);
            for (;;) {
                double y = z + rng.exponential();
                double r = z / y;
                if (rng.uniform() <= r * r * r) return y - tilt_mean_;
            }
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

CheckedModel::CheckedModel(OffspringLaw offspring, StepLaw step)
    : offspring_(std::move(offspring)), step_(std::move(step)) {
    m_ = offspring_.mean();
    log_m_ = std::log(m_);
    b_ = offspring_.min_support_geq_mean();
    mu_ = offspring_.max_support();
}

CheckedModel validate_model(OffspringLaw offspring, StepLaw step) {
    if (offspring.declared_zeta_tail() && !offspring.is_zeta())
        throw AssumptionViolated("inconsistent tail declaration");
    if (std::abs(offspring.total_mass() - 1.0) > 1e-12)
        throw AssumptionViolated("offspring probabilities must sum to 1");
    if (offspring.prob(0) > 0.0) throw AssumptionViolated("p_0 = 0");
    double m = offspring.mean();
    if (!(m > 1.0)) throw AssumptionViolated("1 < m");
    if (!std::isfinite(m)) throw AssumptionViolated("m < inf");

    // P(X = 0) < 1: a lattice law collapsing to a single centered atom
    if ((step.kind() == StepLaw::Kind::FiniteLattice ||
         step.kind() == StepLaw::Kind::TwoPoint)) {
        double mass_zero = 0.0;
        for (const auto& [x, p] : step.atoms())
            if (std::abs(x) < 1e-14) mass_zero += p;
        if (mass_zero >= 1.0 - 1e-12) throw AssumptionViolated("P(X = 0) < 1");
        // E[X] = 0 after centering
        double mean = 0.0;
        for (const auto& [x, p] : step.atoms()) mean += x * p;
        if (std::abs(mean) > 1e-10) throw AssumptionViolated("E[X] = 0");
    }
    if (!(step.lambda_star() > 0.0))
        throw AssumptionViolated("positive exponential moment of X");
    return CheckedModel(std::move(offspring), std::move(step));
}

double offspring_alpha(const OffspringLaw& offspring, double a) {
    if (a < 0.0) throw OutOfRange("offspring_alpha requires a >= 0");
    return offspring.min_support_geq(std::exp(a));
}

} // namespace brw
