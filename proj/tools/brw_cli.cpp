#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "brw/config.hpp"
#include "brw/deviation.hpp"
#include "brw/errors.hpp"
#include "brw/oracle.hpp"
#include "brw/rate.hpp"
#include "brw/sim.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

constexpr int kExitConfig = 2;
constexpr int kExitRegime = 3;
constexpr int kExitCap = 4;

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "json";
    bool oracle_check = false;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json config_json(const brw::RunConfig& cfg) {
    json j = json::object();
    for (const auto& [section, kv] : cfg.sections()) {
        json s = json::object();
        for (const auto& [k, v] : kv) s[k] = v;
        j[section] = s;
    }
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

brw::RunConfig load_config(const Options& opt) {
    brw::RunConfig cfg = brw::RunConfig::parse_file(opt.config_path);
    if (opt.seed) cfg.set("query", "seed", std::to_string(*opt.seed));
    return cfg;
}

// "min:max:step" -> inclusive grid; single x otherwise
std::vector<double> x_grid(const brw::RunConfig& cfg) {
    std::vector<double> xs;
    if (auto spec = cfg.maybe_string("query", "x_grid")) {
        double lo, hi, step;
        if (std::sscanf(spec->c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
            step <= 0.0)
            throw brw::ConfigError("query.x_grid: expected min:max:step");
        for (double v = lo; v <= hi + 1e-12 * step; v += step)
            xs.push_back(v);
    }
    return xs;
}

int cmd_classify(const Options& opt) {
    brw::RunConfig cfg = load_config(opt);
    brw::CheckedModel model = brw::model_from_config(cfg);
    double a = cfg.get_double("query", "a");
    double x = cfg.get_double("query", "x");

    brw::RateProfile profile = brw::make_rate_profile(model);
    brw::Regime regime = brw::classify_regime(model, a, x);

    json j;
    j["version"] = kVersion;
    j["config"] = config_json(cfg);
    j["regime"] = brw::regime_name(regime);
    j["x_star"] = profile.x_star;
    j["L"] = model.L();
    j["lambda_star"] = profile.cgf.lambda_star;
    j["cgf_case"] = profile.cgf.case_id;
    j["log_m"] = model.log_m();
    if (a < model.log_m()) {
        try {
            j["inf_ys_over_s"] = brw::inf_ys_over_s(model, a, x);
        } catch (const brw::NoSolution&) {
            j["inf_ys_over_s"] = nullptr;
        }
    }
    write_json(std::filesystem::path(opt.out_dir) / "regime.json", j);
    return 0;
}

int cmd_rate(const Options& opt) {
    brw::RunConfig cfg = load_config(opt);
    brw::CheckedModel model = brw::model_from_config(cfg);
    double a = cfg.get_double("query", "a");
    double x = cfg.get_double("query", "x");

    std::ostringstream csv;
    csv << "# version " << kVersion << "\n";
    {
        std::istringstream rendered(cfg.render());
        std::string line;
        while (std::getline(rendered, line))
            if (!line.empty()) csv << "# " << line << "\n";
    }
    csv << "kind,x,a,I_x,I_ax,s_star,y_star,closed_form_gauss,c_star,"
           "upper_exponent,lower_exponent,regime\n";

    brw::CgfProfile profile = brw::classify_cgf(model.step());
    for (double xv : x_grid(cfg)) {
        csv << "rate," << fmt17(xv) << ",," << fmt17(brw::rate_I(model.step(), profile, xv))
            << ",,,,,,,,\n";
    }

    brw::Regime regime = brw::classify_regime(model, a, x);
    std::string rname = brw::regime_name(regime);
    double I_x = brw::rate_I(model.step(), profile, x);
    switch (regime) {
    case brw::Regime::THM1_L_INF:
    case brw::Regime::THM1_REMARK_I:
    case brw::Regime::THM1_REMARK_II: {
        brw::DeviationResult r = brw::rate_Iax(model, a, x);
        std::string closed;
        if (model.step().kind() == brw::StepLaw::Kind::Normal) {
            double s2 = model.step().param() * model.step().param();
            closed = fmt17(x * x * model.log_m() /
                               (2.0 * s2 * (model.log_m() - a)) -
                           model.log_m());
        }
        csv << "deviation," << fmt17(x) << "," << fmt17(a) << ","
            << fmt17(I_x) << "," << fmt17(r.I_ax) << "," << fmt17(r.s_star)
            << "," << fmt17(r.y_star) << "," << closed << ",,,," << rname
            << "\n";
        break;
    }
    case brw::Regime::THM2_I:
    case brw::Regime::THM2_II: {
        double cs = brw::cstar(model, a, x);
        brw::DeviationResult r = brw::double_exp_bounds(model, a, x);
        csv << "deviation," << fmt17(x) << "," << fmt17(a) << ","
            << fmt17(I_x) << ",,,,," << fmt17(cs) << ","
            << fmt17(r.upper_exponent) << ","
            << (r.lower_is_positivity_flag ? "0+" : fmt17(r.lower_exponent))
            << "," << rname << "\n";
        break;
    }
    case brw::Regime::A_GE_LOGM: {
        brw::DeviationResult r = brw::double_exp_bounds(model, a, x);
        csv << "deviation," << fmt17(x) << "," << fmt17(a) << ","
            << fmt17(I_x) << ",,,,,," << fmt17(r.upper_exponent) << ","
            << (r.lower_is_positivity_flag ? "0+" : fmt17(r.lower_exponent))
            << "," << rname << "\n";
        break;
    }
    case brw::Regime::BOUNDARY_OPEN:
        throw brw::WrongRegime("boundary case: decay scale unresolved");
    }

    write_text(std::filesystem::path(opt.out_dir) / "rates.csv", csv.str());
    return 0;
}

int cmd_simulate(const Options& opt) {
    brw::RunConfig cfg = load_config(opt);
    brw::CheckedModel model = brw::model_from_config(cfg);
    double a = cfg.get_double("query", "a");
    double x = cfg.get_double("query", "x");
    int n = static_cast<int>(cfg.get_int("query", "n"));
    std::uint64_t replicates = cfg.get_u64("query", "replicates");
    std::uint64_t seed = cfg.get_u64("query", "seed");
    if (replicates == 0) throw brw::ConfigError("query.replicates must be >= 1");

    brw::EvolveCaps caps;
    if (auto cap = cfg.maybe_u64("sim", "max_particles"))
        caps.max_particles = *cap;

    std::vector<brw::ReplicateRecord> records;
    bool want_csv = opt.format == "csv";
    brw::SimEstimate est = brw::estimate_upper_dev(
        model, a, x, n, replicates, seed, caps, want_csv ? &records : nullptr);

    json j;
    j["version"] = kVersion;
    j["config"] = config_json(cfg);
    j["p_hat"] = est.p_hat;
    j["replicates"] = est.replicates;
    j["successes"] = est.successes;
    j["ci95"] = {est.ci_lo, est.ci_hi};
    j["seed"] = est.seed;
    j["n"] = est.n;
    j["threshold"] = est.threshold;
    j["a"] = est.a;
    j["x"] = est.x;
    j["capped_replicates"] = est.capped_replicates;

    if (opt.oracle_check) {
        double exact = brw::exact_upper_dev(model, a, x, n);
        double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-300) /
                              static_cast<double>(est.replicates));
        j["oracle"]["exact_p"] = exact;
        j["oracle"]["abs_error"] = std::abs(est.p_hat - exact);
        j["oracle"]["sigma_distance"] =
            se > 0.0 ? std::abs(est.p_hat - exact) / se : 0.0;
        brw::CountDistribution dist = brw::exact_level_dist(
            model, n, x * static_cast<double>(n));
        std::ostringstream pmf;
        pmf << "count,probability\n";
        for (std::size_t k = 0; k < dist.pmf.size(); ++k)
            pmf << k << "," << fmt17(dist.pmf[k]) << "\n";
        write_text(std::filesystem::path(opt.out_dir) / "pmf.csv", pmf.str());
    }

    write_json(std::filesystem::path(opt.out_dir) / "estimate.json", j);

    if (want_csv) {
        std::ostringstream rcsv;
        rcsv << "replicate,n,count_at_level,max_position,capped\n";
        for (const auto& r : records)
            rcsv << r.replicate << "," << r.n << "," << r.count_at_level << ","
                 << fmt17(r.max_position) << "," << (r.capped ? 1 : 0) << "\n";
        write_text(std::filesystem::path(opt.out_dir) / "replicates.csv",
                   rcsv.str());
    }

    // > 0.1% capped replicates invalidates the tail estimate
    if (est.capped_replicates * 1000 > est.replicates) {
        std::fprintf(stderr, "error: %llu of %llu replicates hit the particle cap\n",
                     static_cast<unsigned long long>(est.capped_replicates),
                     static_cast<unsigned long long>(est.replicates));
        return kExitCap;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching random walk deviation-rate toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed_flag = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "config file path")
            ->required();
        sub->add_option("--seed", seed_flag, "RNG seed (overrides config)")
            ->each([&](const std::string&) { opt.seed = seed_flag; });
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_flag("--oracle-check", opt.oracle_check,
                      "cross-check against the exact lattice oracle");
    };

    CLI::App* classify = app.add_subcommand("classify", "regime report");
    CLI::App* rate = app.add_subcommand("rate", "rate function tables");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate");
    add_common(classify);
    add_common(rate);
    add_common(simulate);

    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(opt.out_dir);
        if (classify->parsed()) return cmd_classify(opt);
        if (rate->parsed()) return cmd_rate(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
    } catch (const brw::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const brw::AssumptionViolated& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const brw::WrongRegime& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRegime;
    } catch (const brw::PopulationCapExceeded& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCap;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
