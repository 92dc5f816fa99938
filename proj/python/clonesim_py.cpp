#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clonesim/config.hpp"
#include "clonesim/errors.hpp"
#include "clonesim/protocol.hpp"
#include "clonesim/report_io.hpp"
#include "clonesim/verification.hpp"

namespace py = pybind11;
using namespace clonesim;

namespace {

ProtocolConfig config_from_text(const std::string& text) { return config_from_map(parse_config_text(text)); }

py::dict dynamics_dict(const DynamicsReport& d) {
    py::dict out;
    out["emission_prob"] = d.emission_prob;
    out["spont_loss"] = d.spont_loss;
    out["residual_norm2"] = d.residual_norm2;
    out["excited_pop_max"] = d.excited_pop_max;
    out["adiabaticity_warning"] = d.adiabaticity_warning;
    out["t"] = d.pulse_shape.t;
    out["f"] = d.pulse_shape.f;
    return out;
}

}  // namespace

PYBIND11_MODULE(_clonesim, m) {
    m.doc() = "Remote 1->2 qubit cloning simulator";

    // Translators run newest first, so the derived type goes last.
    py::register_exception<Error>(m, "SimulationError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("clone_fidelity", [](cplx a, cplx b) { return clone_fidelity(InputQubit(a, b)); }, py::arg("a"),
          py::arg("b"), "Fidelity of each clone from the ideal cloning circuit.");
    m.def("unot_fidelity", [](cplx a, cplx b) { return unot_fidelity(InputQubit(a, b)); }, py::arg("a"),
          py::arg("b"));

    m.def("default_config_text", [] { return config_to_text(default_config()); });
    m.def("normalize_config_text", [](const std::string& text) { return config_to_text(config_from_text(text)); },
          "Parse a config and print it back in canonical form.");

    m.def(
        "run_json",
        [](const std::string& config_text) {
            const ProtocolConfig cfg = config_from_text(config_text);
            py::gil_scoped_release release;
            return report_to_json(run(cfg)).dump();
        },
        py::arg("config_text"), "Full protocol run; returns the JSON report.");

    m.def(
        "analytic_json",
        [](cplx a, cplx b, double eta, double dark_rate, double window, std::uint64_t seed) {
            ProtocolConfig cfg = default_config();
            cfg.input = InputQubit(a, b);
            cfg.detector = {eta, dark_rate, window};
            cfg.seed = seed;
            py::gil_scoped_release release;
            return report_to_json(run(cfg)).dump();
        },
        py::arg("a"), py::arg("b"), py::arg("eta") = 1.0, py::arg("dark_rate") = 0.0, py::arg("window") = 1.0,
        py::arg("seed") = default_config().seed);

    m.def(
        "evolve",
        [](const std::string& side, cplx a, cplx b, double kappa, double gamma, double t_total, double omega_max,
           double dt) {
            const Side s = side == "alice" ? Side::Alice : side == "bob" ? Side::Bob
                                                                          : throw ConfigError("side must be alice or bob");
            SystemParams p = default_params(s);
            p.kappa = kappa;
            p.gamma = gamma;
            PulseSchedule pulse;
            pulse.t_total = t_total;
            pulse.omega_max = omega_max;
            const StateVector init = s == Side::Alice ? alice_initial(a, b) : bob_initial();
            DynamicsReport d;
            {
                py::gil_scoped_release release;
                d = evolve(init, p, pulse, dt);
            }
            py::dict out = dynamics_dict(d);
            out["f_analytic"] = pulse_shape_analytic(p, pulse, d.pulse_shape.t).f;
            out["overlap_analytic"] = pulse_overlap(d.pulse_shape, pulse_shape_analytic(p, pulse, d.pulse_shape.t));
            return out;
        },
        py::arg("side"), py::arg("a") = cplx(1.0), py::arg("b") = cplx(0.0), py::arg("kappa") = 1.0,
        py::arg("gamma") = 0.1, py::arg("t_total") = 200.0, py::arg("omega_max") = 20.0, py::arg("dt") = 0.1,
        "Integrate one node; returns emission diagnostics and the pulse shape.");

    m.def("sweepable_params", &sweepable_params);
    m.def(
        "sweep_csv",
        [](const std::string& config_text, const std::string& param, const std::vector<double>& values) {
            const ProtocolConfig cfg = config_from_text(config_text);
            py::gil_scoped_release release;
            return sweep_csv(param, run_sweep(cfg, param, values));
        },
        py::arg("config_text"), py::arg("param"), py::arg("values"));

    m.def(
        "acceptance",
        [](std::uint64_t seed) {
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = run_acceptance(seed);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["id"] = r.id;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = default_config().seed);
}
