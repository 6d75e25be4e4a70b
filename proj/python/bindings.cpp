#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geoctl/error.hpp"
#include "geoctl/io.hpp"
#include "geoctl/krotov.hpp"
#include "geoctl/sampler.hpp"
#include "geoctl/verify.hpp"

namespace py = pybind11;
using namespace geoctl;

namespace {

py::dict solution_dict(const GeodesicSolution& s) {
  py::dict d;
  d["costate"] = s.costate.coefficients;
  d["final_unitary"] = s.final_unitary;
  d["fidelity"] = s.fidelity;
  d["field"] = s.field.values;
  d["energy"] = s.energy;
  d["infidelity"] = s.infidelity;
  return d;
}

}  // namespace

PYBIND11_MODULE(_geoctl, m) {
  m.doc() = "Energy-optimal gate synthesis by sub-Riemannian geodesic shooting";

  static py::handle exc = py::exception<Error>(m, "GeoctlError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<NoiseParams>(m, "NoiseParams")
      .def(py::init<>())
      .def_readwrite("eta", &NoiseParams::eta)
      .def_readwrite("omega_c", &NoiseParams::omega_c)
      .def_readwrite("theta", &NoiseParams::theta)
      .def_readwrite("tau", &NoiseParams::tau);

  py::class_<Problem>(m, "Problem")
      .def(py::init<>())
      .def_static("single_qubit_dephasing", &Problem::single_qubit_dephasing, py::arg("noise") = NoiseParams{})
      .def_static("two_qubit_crosstalk", &Problem::two_qubit_crosstalk, py::arg("tau") = 1.0)
      .def_readwrite("n_qubits", &Problem::n_qubits)
      .def_readwrite("system_qubits", &Problem::system_qubits)
      .def_readwrite("distribution", &Problem::distribution)
      .def_readwrite("drift_kind", &Problem::drift_kind)
      .def_readwrite("drift_labels", &Problem::drift_labels)
      .def_readwrite("noise", &Problem::noise)
      .def_readwrite("tau", &Problem::tau)
      .def_readwrite("steps", &Problem::steps)
      .def("labels", [](const Problem& p) {
        std::vector<std::string> out;
        for (const auto& l : p.basis().labels()) out.push_back(l.str());
        return out;
      })
      .def("c_target", [](const Problem& p, const CMatrix& gate) { return p.target(gate).c_target; })
      .def(
          "integrate",
          [](const Problem& p, const RVector& costate, const std::optional<CMatrix>& gate, int steps) {
            const AlgebraBasis b = p.basis();
            const DriftSpec drift = p.drift(b);
            std::optional<GateTarget> t;
            if (gate) t = p.target(*gate);
            return solution_dict(
                integrate_geodesic(CoState(costate), drift, b, p.tau, steps > 0 ? steps : p.steps, t ? &*t : nullptr));
          },
          py::arg("costate"), py::arg("gate") = std::nullopt, py::arg("steps") = 0);

  m.def("named_gate", &named_gate);
  m.def("read_gate", [](const std::string& path) { return read_gate_file(path); });
  m.def(
      "algebra_dimension",
      [](const std::vector<std::string>& distribution, const std::vector<std::string>& drift) {
        return close_algebra(distribution, drift).size();
      },
      py::arg("distribution"), py::arg("drift") = std::vector<std::string>{});
  m.def("mu", &mu, py::arg("t"), py::arg("noise") = NoiseParams{});
  m.def("drift_coefficient", &drift_coefficient, py::arg("t"), py::arg("noise") = NoiseParams{});
  m.def("fidelity", py::overload_cast<const CMatrix&, const CMatrix&>(&fidelity));

  m.def(
      "generate_bank",
      [](const Problem& p, double scale, std::uint64_t seed, int jobs) {
        NormSchedule s = p.system_qubits == 2 ? NormSchedule::two_qubit() : NormSchedule::fine();
        s.scale = scale;
        return generate_bank(s, p, seed, jobs);
      },
      py::arg("problem"), py::arg("scale") = 0.1, py::arg("seed") = 42, py::arg("jobs") = 1,
      py::call_guard<py::gil_scoped_release>());
  py::class_<SampleBank>(m, "SampleBank")
      .def("__len__", [](const SampleBank& b) { return b.entries.size(); })
      .def("valid_count", &SampleBank::valid_count)
      .def("save", [](const SampleBank& b, const std::string& path) { write_bank(fs::path(path), b); })
      .def_static("load", [](const std::string& path) { return read_bank(fs::path(path)); });

  m.def(
      "synthesize",
      [](const SampleBank& bank, const CMatrix& gate, const std::string& strategy, bool exhaustive, int steps,
         int retry_budget) {
        SynthesisOptions o;
        o.exhaustive = exhaustive;
        o.steps = steps;
        o.retry_budget = retry_budget;
        SynthesisResult r;
        {
          py::gil_scoped_release nogil;
          r = synthesize(bank.header.problem.target(gate), bank, parse_strategy(strategy), o);
        }
        py::dict d = solution_dict(r.solution);
        d["ok"] = r.ok;
        d["status"] = r.status;
        d["classification"] = r.classification ? r.classification->str() : std::string();
        d["attempts"] = r.attempts.size();
        return d;
      },
      py::arg("bank"), py::arg("gate"), py::arg("strategy") = "ascending", py::arg("exhaustive") = true,
      py::arg("steps") = 2000, py::arg("retry_budget") = 8);

  m.def(
      "krotov",
      [](const Problem& p, const CMatrix& gate, double lambda, int max_iters, double jt_tol) {
        KrotovConfig c;
        c.lambda = lambda;
        c.max_iters = max_iters;
        c.jt_tol = jt_tol;
        const AlgebraBasis b = p.basis();
        KrotovResult r;
        {
          py::gil_scoped_release nogil;
          r = krotov_optimize(p.target(gate), p.drift(b), b, c, p.tau, p.steps);
        }
        py::dict d;
        d["field"] = r.field.values;
        d["jt_history"] = r.jt_history;
        d["final_jt"] = r.final_jt;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["energy"] = r.energy;
        d["final_unitary"] = r.final_unitary;
        return d;
      },
      py::arg("problem"), py::arg("gate"), py::arg("lam") = KrotovConfig{}.lambda,
      py::arg("max_iters") = KrotovConfig{}.max_iters, py::arg("jt_tol") = KrotovConfig{}.jt_tol);

  m.def(
      "average_gate_fidelity",
      [](const RMatrix& field, const CMatrix& gate, const NoiseParams& p, int steps) {
        VerificationReport r;
        {
          py::gil_scoped_release nogil;
          r = average_gate_fidelity(ControlField(p.tau, field), gate, p, steps);
        }
        py::dict d;
        d["average"] = r.average;
        d["average_at_tau"] = r.average_at_tau;
        d["target_average_at_tau"] = r.target_average_at_tau;
        d["state_fidelity"] = r.state_fidelity;
        return d;
      },
      py::arg("field"), py::arg("gate"), py::arg("noise") = NoiseParams{}, py::arg("steps") = 0);
  m.def("no_control_fidelity", &no_control_fidelity, py::arg("noise") = NoiseParams{}, py::arg("steps") = 2000,
        py::call_guard<py::gil_scoped_release>());
}
