#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "brw/config.hpp"
#include "brw/deviation.hpp"
#include "brw/errors.hpp"
#include "brw/model.hpp"
#include "brw/oracle.hpp"
#include "brw/rate.hpp"
#include "brw/sim.hpp"

namespace py = pybind11;
using namespace brw;

PYBIND11_MODULE(_core, m) {
    m.doc() = "branching random walk deviation rates";

    py::register_exception<AssumptionViolated>(m, "AssumptionViolated");
    py::register_exception<DomainExceeded>(m, "DomainExceeded");
    py::register_exception<BoundaryPoint>(m, "BoundaryPoint");
    py::register_exception<NoSolution>(m, "NoSolution");
    py::register_exception<WrongRegime>(m, "WrongRegime");
    py::register_exception<ZeroProbability>(m, "ZeroProbability");
    py::register_exception<PopulationCapExceeded>(m, "PopulationCapExceeded");
    py::register_exception<TooLarge>(m, "TooLarge");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<OffspringLaw>(m, "OffspringLaw")
        .def_static("finite",
                    [](std::vector<std::pair<std::uint64_t, double>> support) {
                        return OffspringLaw::finite(std::move(support));
                    })
        .def_static("zeta_tail", &OffspringLaw::zeta_tail)
        .def_property_readonly("mean", &OffspringLaw::mean)
        .def("prob", &OffspringLaw::prob)
        .def("tail_prob", &OffspringLaw::tail_prob);

    py::class_<StepLaw>(m, "StepLaw")
        .def_static("normal", &StepLaw::normal)
        .def_static("two_point", &StepLaw::two_point)
        .def_static("uniform", &StepLaw::uniform)
        .def_static("lattice", &StepLaw::lattice)
        .def_static("tilted_polynomial_density",
                    &StepLaw::tilted_polynomial_density)
        .def_static("rademacher", &StepLaw::rademacher)
        .def("cgf", &StepLaw::cgf)
        .def("cgf_prime", &StepLaw::cgf_prime)
        .def_property_readonly("lambda_star", &StepLaw::lambda_star)
        .def_property_readonly("ess_sup", &StepLaw::ess_sup)
        .def("tail_prob", &StepLaw::tail_prob);

    py::class_<CheckedModel>(m, "CheckedModel")
        .def_property_readonly("m", &CheckedModel::m)
        .def_property_readonly("log_m", &CheckedModel::log_m)
        .def_property_readonly("b", &CheckedModel::b)
        .def_property_readonly("mu", &CheckedModel::mu)
        .def_property_readonly("L", &CheckedModel::L);

    m.def("validate_model", &validate_model, py::arg("offspring"),
          py::arg("step"));
    m.def("offspring_alpha", &offspring_alpha);

    py::class_<CgfProfile>(m, "CgfProfile")
        .def_readonly("case_id", &CgfProfile::case_id)
        .def_readonly("lambda_star", &CgfProfile::lambda_star)
        .def_readonly("L", &CgfProfile::L)
        .def_readonly("T", &CgfProfile::T)
        .def_readonly("mass_at_L", &CgfProfile::mass_at_L);
    m.def("classify_cgf", &classify_cgf);

    m.def("rate_I",
          [](const StepLaw& step, double x) { return rate_I(step, x); });
    m.def("speed_xstar", &speed_xstar);
    m.def("biggins_growth", &biggins_growth);

    m.def("regime_name", &regime_name);
    m.def("classify_regime", &classify_regime, py::arg("model"), py::arg("a"),
          py::arg("x"), py::arg("grid_points") = 512);
    m.def("solve_ys", &solve_ys);
    m.def("inf_ys_over_s", &inf_ys_over_s, py::arg("model"), py::arg("a"),
          py::arg("x"), py::arg("grid_points") = 512);
    m.def("cstar", &cstar);

    py::enum_<Regime>(m, "Regime")
        .value("THM1_L_INF", Regime::THM1_L_INF)
        .value("THM1_REMARK_I", Regime::THM1_REMARK_I)
        .value("THM1_REMARK_II", Regime::THM1_REMARK_II)
        .value("THM2_I", Regime::THM2_I)
        .value("THM2_II", Regime::THM2_II)
        .value("BOUNDARY_OPEN", Regime::BOUNDARY_OPEN)
        .value("A_GE_LOGM", Regime::A_GE_LOGM);

    py::class_<DeviationResult>(m, "DeviationResult")
        .def_readonly("I_ax", &DeviationResult::I_ax)
        .def_readonly("s_star", &DeviationResult::s_star)
        .def_readonly("y_star", &DeviationResult::y_star)
        .def_readonly("lower_exponent", &DeviationResult::lower_exponent)
        .def_readonly("upper_exponent", &DeviationResult::upper_exponent)
        .def_readonly("lower_is_positivity_flag",
                      &DeviationResult::lower_is_positivity_flag)
        .def_readonly("lower_rate", &DeviationResult::lower_rate)
        .def_readonly("upper_rate", &DeviationResult::upper_rate)
        .def_readonly("diagnostics", &DeviationResult::diagnostics);

    m.def("rate_Iax", &rate_Iax);
    m.def("double_exp_bounds", &double_exp_bounds);
    m.def("pareto_bounds", &pareto_bounds);

    py::class_<SimEstimate>(m, "SimEstimate")
        .def_readonly("p_hat", &SimEstimate::p_hat)
        .def_readonly("replicates", &SimEstimate::replicates)
        .def_readonly("successes", &SimEstimate::successes)
        .def_readonly("ci_lo", &SimEstimate::ci_lo)
        .def_readonly("ci_hi", &SimEstimate::ci_hi)
        .def_readonly("seed", &SimEstimate::seed)
        .def_readonly("n", &SimEstimate::n)
        .def_readonly("threshold", &SimEstimate::threshold)
        .def_readonly("capped_replicates", &SimEstimate::capped_replicates);

    m.def(
        "estimate_upper_dev",
        [](const CheckedModel& model, double a, double x, int n,
           std::uint64_t replicates, std::uint64_t seed) {
            return estimate_upper_dev(model, a, x, n, replicates, seed);
        },
        py::arg("model"), py::arg("a"), py::arg("x"), py::arg("n"),
        py::arg("replicates"), py::arg("seed"));
    m.def("deviation_threshold", &deviation_threshold);

    py::class_<CountDistribution>(m, "CountDistribution")
        .def_readonly("level", &CountDistribution::level)
        .def_readonly("horizon", &CountDistribution::horizon)
        .def_readonly("pmf", &CountDistribution::pmf);
    m.def("exact_level_dist",
          [](const CheckedModel& model, int n, double y) {
              return exact_level_dist(model, n, y);
          });
    m.def("exact_upper_dev",
          [](const CheckedModel& model, double a, double x, int n) {
              return exact_upper_dev(model, a, x, n);
          });

    m.def("parse_config", [](const std::string& text) {
        RunConfig cfg = RunConfig::parse_string(text);
        return cfg.sections();
    });
    m.def("model_from_config_text", [](const std::string& text) {
        return model_from_config(RunConfig::parse_string(text));
    });

    m.attr("__version__") = "0.1.0";
}
