#include "brw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "brw/errors.hpp"
#include "brw/rate.hpp"
#include "brw/sim.hpp"

namespace brw {

namespace {

using Pmf = std::vector<long double>;

Pmf convolve(const Pmf& a, const Pmf& b) {
    Pmf out(a.size() + b.size() - 1, 0.0L);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0L) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

struct DpContext {
    const CheckedModel& model;
    OracleLimits limits;
    std::map<std::pair<int, double>, Pmf> memo;
    std::size_t entries = 0;

    // law of the count of generation-g descendants (of one particle at the
    // origin) whose final position is >= t
    const Pmf& dist(int g, double t) {
        auto key = std::make_pair(g, t);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        Pmf result;
        if (g == 0) {
            result = t <= 0.0 ? Pmf{0.0L, 1.0L} : Pmf{1.0L};
        } else {
            // child mixture: step first, then evolve g-1 further generations
            Pmf child;
            for (const auto& [x, q] : model.step().atoms()) {
                const Pmf& sub = dist(g - 1, t - x);
                if (child.size() < sub.size()) child.resize(sub.size(), 0.0L);
                for (std::size_t i = 0; i < sub.size(); ++i)
                    child[i] += static_cast<long double>(q) * sub[i];
            }
            // offspring mixture of k-fold convolutions
            Pmf power{1.0L}; // conv^0 = delta at 0
            std::uint64_t done = 0;
            for (const auto& [k, p] : model.offspring().support()) {
                if (p == 0.0) continue;
                while (done < k) {
                    power = convolve(power, child);
                    ++done;
                }
                if (result.size() < power.size()) result.resize(power.size(), 0.0L);
                for (std::size_t i = 0; i < power.size(); ++i)
                    result[i] += static_cast<long double>(p) * power[i];
            }
        }
        entries += result.size();
        if (entries > limits.max_state_entries)
            throw TooLarge("oracle DP state space");
        return memo.emplace(key, std::move(result)).first->second;
    }
};

void check_limits(const CheckedModel& model, int n, const OracleLimits& limits) {
    if (n > limits.n_max) throw TooLarge("oracle horizon n > n_max");
    if (model.step().kind() != StepLaw::Kind::FiniteLattice &&
        model.step().kind() != StepLaw::Kind::TwoPoint)
        throw TooLarge("oracle requires lattice steps");
    if (model.step().atoms().size() > limits.max_step_atoms)
        throw TooLarge("too many step atoms");
    if (model.offspring().is_zeta() ||
        model.offspring().max_support() >
            static_cast<double>(limits.max_offspring))
        throw TooLarge("offspring support too large");
}

CountDistribution finalize(Pmf pmf, int n, double y) {
    long double total = 0.0L;
    for (long double v : pmf) total += v;
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-12)
        throw TooLarge("oracle pmf mass drift exceeds 1e-12");
    CountDistribution out;
    out.level = y;
    out.horizon = n;
    out.pmf.reserve(pmf.size());
    for (long double v : pmf)
        out.pmf.push_back(static_cast<double>(v / total));
    return out;
}

} // namespace

CountDistribution exact_level_dist(const CheckedModel& model, int n, double y,
                                   const OracleLimits& limits) {
    check_limits(model, n, limits);
    DpContext ctx{model, limits, {}, 0};
    return finalize(ctx.dist(n, y), n, y);
}

CountDistribution exact_population_dist(const CheckedModel& model, int n,
                                        const OracleLimits& limits) {
    if (n > limits.n_max) throw TooLarge("oracle horizon n > n_max");
    if (model.offspring().is_zeta() ||
        model.offspring().max_support() >
            static_cast<double>(limits.max_offspring))
        throw TooLarge("offspring support too large");
    // counts-only recursion, independent of the positional DP
    Pmf cur{0.0L, 1.0L};
    for (int g = 0; g < n; ++g) {
        // next = offspring-mixture convolution power applied particle by
        // particle: P(next = j) = sum_i cur[i] * (child law)^{*i}[j]
        Pmf child(model.offspring().support().back().first + 1, 0.0L);
        for (const auto& [k, p] : model.offspring().support())
            child[k] = static_cast<long double>(p);
        Pmf next{0.0L};
        Pmf power{1.0L};
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] != 0.0L) {
                if (next.size() < power.size()) next.resize(power.size(), 0.0L);
                for (std::size_t j = 0; j < power.size(); ++j)
                    next[j] += cur[i] * power[j];
            }
            if (i + 1 < cur.size()) power = convolve(power, child);
        }
        cur.swap(next);
    }
    return finalize(std::move(cur), n, -std::numeric_limits<double>::infinity());
}

double exact_upper_dev(const CheckedModel& model, double a, double x, int n,
                       const OracleLimits& limits) {
    CountDistribution dist =
        exact_level_dist(model, n, x * static_cast<double>(n), limits);
    std::uint64_t threshold = deviation_threshold(a, n);
    double tail = 0.0;
    for (std::size_t k = dist.pmf.size(); k-- > 0;) {
        if (k < threshold) break;
        tail += dist.pmf[k];
    }
    return tail;
}

double grid_legendre(const StepLaw& step, double x, double lambda_hi,
                     std::size_t points) {
    double best = 0.0; // t = 0 term is x*0 - Lambda(0) = 0
    for (std::size_t i = 1; i <= points; ++i) {
        double t = lambda_hi * static_cast<double>(i) / static_cast<double>(points);
        double v = t * x - step.cgf(t);
        best = std::max(best, v);
    }
    return best;
}

GridInfimum grid_infimum_Iax(const CheckedModel& model, double a, double x,
                             std::size_t s_points, std::size_t y_points) {
    GridInfimum res;
    res.value = std::numeric_limits<double>::infinity();
    double log_m = model.log_m();
    const StepLaw& step = model.step();
    CgfProfile profile = classify_cgf(step);
    for (std::size_t i = 1; i <= s_points; ++i) {
        double s = static_cast<double>(i) / static_cast<double>(s_points + 1);
        double budget = log_m - a / (1.0 - s);
        if (budget < 0.0) continue; // constraint infeasible for this s
        for (std::size_t j = 1; j <= y_points; ++j) {
            double y = x * static_cast<double>(j) / static_cast<double>(y_points);
            double arg = (x - y) / (1.0 - s);
            if (rate_I(step, profile, arg) > budget) continue;
            double v = s * rate_I(step, profile, y / s) - s * log_m;
            if (v < res.value) {
                res.value = v;
                res.s = s;
                res.y = y;
                res.feasible = true;
            }
        }
    }
    return res;
}

} // namespace brw
