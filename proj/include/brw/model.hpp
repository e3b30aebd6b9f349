#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "brw/rng.hpp"

namespace brw {

/// Offspring distribution {p_k} on the positive integers. Either an explicit
/// finite support or a zeta tail p_k proportional to k^{-beta-1}, k >= 1.
class OffspringLaw {
public:
    // declared_zeta_tail marks a config that claims a zeta tail while listing
    // an explicit finite support; validate_model rejects the contradiction
    static OffspringLaw finite(std::vector<std::pair<std::uint64_t, double>> support,
                               bool declared_zeta_tail = false);
    static OffspringLaw zeta_tail(double beta);

    bool is_zeta() const { return zeta_; }
    bool declared_zeta_tail() const { return declared_zeta_; }
    double beta() const { return beta_; }
    const std::vector<std::pair<std::uint64_t, double>>& support() const {
        return support_;
    }

    double prob(std::uint64_t k) const;
    double mean() const { return mean_; }
    double total_mass() const { return total_mass_; }

    // smallest support point >= mean (the b of the double-exponential bound)
    std::uint64_t min_support_geq_mean() const;
    // largest support point; +inf for a zeta tail
    double max_support() const;
    // smallest k >= threshold with p_k > 0; +inf if none
    double min_support_geq(double threshold) const;

    // tail P(count > y); exact for finite support, series+integral tail for zeta
    double tail_prob(double y) const;

    std::uint64_t sample(RngStream& rng) const;

    // zeta tails only: mass beyond the sampling cap, recorded at construction
    double truncation_mass() const { return truncation_mass_; }
    static constexpr std::uint64_t kZetaSampleCap = 1'000'000'000ULL;

private:
    OffspringLaw() = default;

    bool zeta_ = false;
    bool declared_zeta_ = false;
    double beta_ = 0.0;
    double zeta_norm_ = 0.0; // sum_k k^{-beta-1}
    double truncation_mass_ = 0.0;
    std::vector<std::pair<std::uint64_t, double>> support_; // sorted by k
    double mean_ = 0.0;
    double total_mass_ = 0.0;
};

/// Zero-mean step distribution with analytic CGF. Centering (subtracting the
/// analytic mean of the raw inputs) happens at construction.
class StepLaw {
public:
    enum class Kind { Normal, TwoPoint, Uniform, FiniteLattice, TiltedPolynomialDensity };

    static StepLaw normal(double sigma);
    static StepLaw two_point(double x1, double x2, double q);
    static StepLaw uniform(double half_width);
    static StepLaw lattice(std::vector<std::pair<double, double>> atoms);
    static StepLaw tilted_polynomial_density();

    static StepLaw rademacher() { return two_point(-1.0, 1.0, 0.5); }

    Kind kind() const { return kind_; }
    std::string kind_name() const;

    double cgf(double lambda) const;       // Lambda(lambda), throws DomainExceeded
    double cgf_prime(double lambda) const; // Lambda'(lambda)
    double lambda_star() const { return lambda_star_; }
    double ess_sup() const { return ess_sup_; }       // L
    double mass_at_sup() const { return mass_at_sup_; } // P(X = L), 0 when L = inf

    double mean_shift() const { return shift_; } // mean subtracted at construction

    double tail_prob(double c) const; // P(X >= c)
    double sample(RngStream& rng) const;
    double sample_tail(double c, RngStream& rng) const; // X | X >= c

    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }
    double param() const { return param_; } // sigma or half-width

private:
    StepLaw() = default;

    Kind kind_ = Kind::Normal;
    double param_ = 1.0;  // sigma (Normal) or half-width (Uniform)
    double shift_ = 0.0;  // subtracted mean (TwoPoint/FiniteLattice/Tilted)
    std::vector<std::pair<double, double>> atoms_; // centered positions
    double lambda_star_ = 0.0;
    double ess_sup_ = 0.0;
    double mass_at_sup_ = 0.0;

    // tilted density constants
    double tilt_norm_ = 0.0;   // C = 1 / E_3(1)
    double tilt_mean_ = 0.0;   // E[Y] = E_2(1) / E_3(1)
};

/// Validated model handle (Assumption: p_0 = 0, 1 < m < inf, E[X] = 0,
/// P(X = 0) < 1, positive exponential moment of X). Immutable.
class CheckedModel {
public:
    CheckedModel(OffspringLaw offspring, StepLaw step);

    const OffspringLaw& offspring() const { return offspring_; }
    const StepLaw& step() const { return step_; }

    double m() const { return m_; }
    double log_m() const { return log_m_; }
    std::uint64_t b() const { return b_; }
    double mu() const { return mu_; } // +inf for zeta tails
    double L() const { return step_.ess_sup(); }

private:
    OffspringLaw offspring_;
    StepLaw step_;
    double m_ = 0.0;
    double log_m_ = 0.0;
    std::uint64_t b_ = 0;
    double mu_ = 0.0;
};

CheckedModel validate_model(OffspringLaw offspring, StepLaw step);

// smallest k with p_k > 0 and k >= e^a; +inf if none
double offspring_alpha(const OffspringLaw& offspring, double a);

} // namespace brw
