#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qfid/commands.hpp"
#include "qfid/errors.hpp"
#include "qfid/modes.hpp"
#include "qfid/oracle.hpp"
#include "qfid/quench.hpp"
#include "qfid/xy_model.hpp"

namespace py = pybind11;
using namespace qfid;

namespace {

const ModelSpec& model_named(const std::string& name) { return find_model(name); }

py::object rate_to_py(const std::optional<RateValue>& r) {
  if (!r) return py::none();
  return py::float_(r->as_double());
}

py::dict summary_dict(const ScanCell& cell) {
  py::dict d;
  d["value1"] = cell.value1;
  d["value2"] = cell.value2;
  d["status"] = to_string(cell.status);
  d["message"] = cell.message;
  if (cell.summary) {
    d["n_kc"] = cell.summary->n_kc;
    d["n_k0"] = cell.summary->n_k0;
    d["n_k1"] = cell.summary->n_k1;
    d["dqpt_exists"] = cell.summary->dqpt_exists;
    d["lbar_rate"] = rate_to_py(cell.summary->lbar_rate);
    d["alpha_rate"] = rate_to_py(cell.summary->alpha_rate);
  }
  return d;
}

RateMode rate_mode(const std::string& s) {
  if (s == "none") return RateMode::None;
  if (s == "finite") return RateMode::FiniteSize;
  if (s == "thermodynamic") return RateMode::Thermodynamic;
  throw DomainError("rates must be 'none', 'finite' or 'thermodynamic'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quench fidelity, Loschmidt echoes and DQPT mode analysis for two-band models";

  auto base = py::register_exception<Error>(m, "QfidError", PyExc_RuntimeError);
  py::register_exception<GapClosed>(m, "GapClosed", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<CriticalBoundary>(m, "CriticalBoundary", base.ptr());
  py::register_exception<PreconditionFailed>(m, "PreconditionFailed", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<DVector>(m, "DVector")
      .def(py::init([](double x, double y, double z, double d0) { return DVector{x, y, z, d0}; }),
           py::arg("x"), py::arg("y"), py::arg("z") = 0.0, py::arg("d0") = 0.0)
      .def_readwrite("x", &DVector::x)
      .def_readwrite("y", &DVector::y)
      .def_readwrite("z", &DVector::z)
      .def_readwrite("d0", &DVector::d0)
      .def("norm", &DVector::norm)
      .def("__repr__", [](const DVector& d) {
        std::ostringstream s;
        s << "DVector(" << d.x << ", " << d.y << ", " << d.z << ", d0=" << d.d0 << ")";
        return s.str();
      });

  m.def("ground_state", [](const DVector& d) {
    const SpinorState s = ground_state(d);
    return std::pair{s.a, s.b};
  });
  m.def("loschmidt_k", &loschmidt_k, py::arg("d_i"), py::arg("d_f"), py::arg("t"));
  m.def("lbar_k", &lbar_k, py::arg("d_i"), py::arg("d_f"));
  m.def("quench_fidelity_k", &quench_fidelity_k, py::arg("d_i"), py::arg("d_f"));
  m.def("relation_lbar_from_fidelity", &relation_lbar_from_fidelity, py::arg("fq"));
  m.def("critical_times", &critical_times, py::arg("d_f"), py::arg("n_max"));
  m.def("numeric_lbar", &numeric_lbar, py::arg("d_i"), py::arg("d_f"),
        py::arg("time_samples") = 1024);

  m.def("models", &registered_models);
  m.def(
      "dvector",
      [](const std::string& model, const Params& params, double k) {
        return model_named(model).at(params, k);
      },
      py::arg("model"), py::arg("params"), py::arg("k"));

  m.def(
      "analyze_modes",
      [](const Params& gi, const Params& gf, const std::string& model, int resolution) {
        const ModeReport r = analyze_modes(model_named(model), gi, gf, resolution);
        py::dict d;
        d["kc_roots"] = r.kc_roots;
        d["k0_roots"] = r.k0_roots;
        d["k1_roots"] = r.k1_roots;
        d["n_kc"] = r.n_kc;
        d["n_k0"] = r.n_k0;
        d["n_k1"] = r.n_k1;
        d["dqpt_exists"] = r.n_kc > 0;
        d["sufficient"] = sufficient_condition_holds(r);
        d["continuum"] = to_string(r.continuum);
        if (r.boundary) d["boundary"] = std::pair{r.boundary->f0, r.boundary->fpi};
        d["notes"] = r.notes;
        return d;
      },
      py::arg("gamma_i"), py::arg("gamma_f"), py::arg("model") = "xy",
      py::arg("resolution") = kDefaultResolution);

  m.def(
      "dqpt_exists",
      [](const Params& gi, const Params& gf, const std::string& model, int resolution) {
        return dqpt_exists(model_named(model), gi, gf, resolution);
      },
      py::arg("gamma_i"), py::arg("gamma_f"), py::arg("model") = "xy",
      py::arg("resolution") = kDefaultResolution);

  m.def(
      "loschmidt_series",
      [](const Params& gi, const Params& gf, int size, const std::vector<double>& times,
         const std::string& model) {
        const QuenchSpec q(model_named(model), gi, gf, KGrid::periodic(size));
        const LoschmidtSeries s = loschmidt_total(q, times);
        std::vector<double> rate;
        for (const auto& r : s.rate) rate.push_back(r.as_double());
        return std::pair{s.total, rate};
      },
      py::arg("gamma_i"), py::arg("gamma_f"), py::arg("size"), py::arg("times"),
      py::arg("model") = "xy", "Returns (echo, rate) over `times` for a chain of length `size`.");

  m.def(
      "rates",
      [](const Params& gi, const Params& gf, int size, const std::string& model) {
        const QuenchSpec q(model_named(model), gi, gf, KGrid::periodic(size));
        return std::pair{lbar_rate_function(q).as_double(), fidelity_decay_rate(q).as_double()};
      },
      py::arg("gamma_i"), py::arg("gamma_f"), py::arg("size"), py::arg("model") = "xy",
      "Finite-size (lbar rate, fidelity decay rate).");

  m.def(
      "rates_thermodynamic",
      [](const Params& gi, const Params& gf, const std::string& model, double tolerance) {
        ThermodynamicOptions o;
        o.tolerance = tolerance;
        const ModelSpec& spec = model_named(model);
        return std::pair{lbar_rate_thermodynamic(spec, gi, gf, o),
                         fidelity_decay_rate_thermodynamic(spec, gi, gf, o)};
      },
      py::arg("gamma_i"), py::arg("gamma_f"), py::arg("model") = "xy",
      py::arg("tolerance") = 1e-9, "Continuum-limit (lbar rate, fidelity decay rate).");

  m.def(
      "scan",
      [](const Params& gi, std::pair<std::string, std::tuple<double, double, int>> axis1,
         std::pair<std::string, std::tuple<double, double, int>> axis2, const std::string& rates,
         int size, unsigned threads, const std::string& model) {
        const ModelSpec& spec = model_named(model);
        const auto axis = [&](const auto& a) {
          const auto& [lo, hi, n] = a.second;
          return ScanAxis{spec.parameter_index(a.first), lo, hi, n};
        };
        ScanOptions o;
        o.rates = rate_mode(rates);
        o.system_size = size;
        o.threads = threads;
        ScanResult r;
        {
          py::gil_scoped_release release;
          r = scan_phase_diagram(spec, gi, axis(axis1), axis(axis2), o);
        }
        py::list cells;
        for (const auto& cell : r.cells) cells.append(summary_dict(cell));
        return cells;
      },
      py::arg("gamma_i"), py::arg("axis1"), py::arg("axis2"), py::arg("rates") = "none",
      py::arg("size") = 30, py::arg("threads") = 1, py::arg("model") = "xy",
      "Row-major list of cell dicts; axes are (name, (min, max, samples)).");

  m.def("xy_winding_number", [](double h, double eta) { return xy_winding_number({h, eta}); });
  m.def("xy_boundary_fidelities", [](const Params& gi, const Params& gf) {
    const auto b = xy_boundary_fidelities(XYParams::from(gi), XYParams::from(gf));
    return std::pair{b.f0, b.fpi};
  });
  m.def("xy_equilibrium_phase",
        [](double h, double eta) { return xy_equilibrium_phase({h, eta}).region; });

  m.def(
      "verify",
      [](std::uint64_t seed, std::size_t trials, bool inject_fault) {
        SuiteOptions o;
        o.seed = seed;
        o.trials = trials;
        o.inject_fault = inject_fault;
        std::vector<OracleReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_property_suite(o);
        }
        py::list out;
        for (const auto& r : reports) {
          py::dict d;
          d["property"] = to_string(r.property);
          d["pass"] = r.pass;
          d["max_deviation"] = r.max_deviation;
          d["tolerance"] = r.tolerance;
          d["trials"] = r.trials;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 20240601, py::arg("trials") = 1000, py::arg("inject_fault") = false);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the qfid command line in-process; returns (exit_code, stdout, stderr).");
}
