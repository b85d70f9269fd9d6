#include "geophase/adiabatic.hpp"
#include "geophase/bornopp.hpp"
#include "geophase/connection.hpp"
#include "geophase/errors.hpp"
#include "geophase/geometry.hpp"
#include "geophase/holonomy.hpp"
#include "geophase/scenario.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace geophase;

namespace {

LoopKind loop_kind(const std::string& name) {
  if (name == "cone") return LoopKind::Cone;
  if (name == "great-circle") return LoopKind::GreatCircle;
  if (name == "point") return LoopKind::Point;
  throw Error(ErrorKind::DomainError, "unknown loop kind '" + name + "'");
}

CommutatorNormalization normalization(const std::string& name) {
  if (name == "inverse_hbar") return CommutatorNormalization::InverseHbar;
  if (name == "literal") return CommutatorNormalization::Literal;
  throw Error(ErrorKind::DomainError, "normalization must be 'inverse_hbar' or 'literal'");
}

py::dict report_dict(const PhaseReport& r) {
  py::dict d;
  d["total_phase"] = r.total_phase;
  d["dynamical_phase"] = r.dynamical_phase;
  d["geometric_phase"] = r.geometric_phase;
  d["fidelity"] = r.fidelity;
  d["cyclicity"] = r.cyclicity;
  return d;
}

int steps_or_default(const ParametrizedHamiltonian& h, const ParamPath& path, double t,
                     double hbar, int steps) {
  return steps > 0 ? steps : default_steps_per_segment(h, path, t, hbar);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometric phases of parameterized quantum systems";

  // Raised with .kind (error name) and .point (offending parameter point).
  static PyObject* error_type =
      PyErr_NewException("geophase._core.GeophaseError", PyExc_RuntimeError, nullptr);
  m.add_object("GeophaseError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(error_type)(e.what());
      inst.attr("kind") = std::string(e.name());
      inst.attr("point") = e.point();
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  // core
  m.def("eigh", [](const HermitianOperator& h, double tol) {
        const auto dec = eigh(h, tol);
        std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
        for (const auto& c : dec.clusters) clusters.emplace_back(c.first, c.size);
        return py::make_tuple(dec.eigenvalues, dec.eigenvectors, clusters);
      },
      py::arg("h"), py::arg("tol") = kDefaultDegeneracyTol,
      "Ascending eigenvalues, eigenvectors (columns) and clusters as (first, size).");
  m.def("wrap_phase", &wrap_phase);
  m.def("sigma_x", &sigma_x);
  m.def("sigma_y", &sigma_y);
  m.def("sigma_z", &sigma_z);

  // models
  py::class_<ParametrizedHamiltonian, std::shared_ptr<ParametrizedHamiltonian>>(m, "Model")
      .def_property_readonly("param_dim", &ParametrizedHamiltonian::param_dim)
      .def_property_readonly("hilbert_dim", &ParametrizedHamiltonian::hilbert_dim)
      .def("eval", &ParametrizedHamiltonian::eval, py::arg("r"))
      .def("grad", &ParametrizedHamiltonian::grad, py::arg("r"));
  py::class_<SpinHalfModel, ParametrizedHamiltonian, std::shared_ptr<SpinHalfModel>>(
      m, "SpinHalfModel")
      .def(py::init<double>(), py::arg("mu") = 1.0);
  py::class_<QuadrupoleModel, ParametrizedHamiltonian, std::shared_ptr<QuadrupoleModel>>(
      m, "QuadrupoleModel")
      .def(py::init<>());
  py::class_<FunctionModel, ParametrizedHamiltonian, std::shared_ptr<FunctionModel>>(
      m, "FunctionModel")
      .def(py::init<int, int, FunctionModel::EvalFn, FunctionModel::GradFn>(),
           py::arg("param_dim"), py::arg("hilbert_dim"), py::arg("eval"),
           py::arg("grad") = nullptr);
  m.def("spin_half_eigenstate", &spin_half_eigenstate, py::arg("theta"), py::arg("phi"));

  // geometry
  py::class_<ParamPath>(m, "ParamPath")
      .def(py::init<std::vector<ParameterPoint>, bool>(), py::arg("samples"),
           py::arg("closed"))
      .def_property_readonly("samples", &ParamPath::samples)
      .def_property_readonly("closed", &ParamPath::closed)
      .def_property_readonly("segments", &ParamPath::segments)
      .def_property_readonly("dim", &ParamPath::dim)
      .def("length", &ParamPath::length)
      .def("reversed", &ParamPath::reversed)
      .def("__len__", [](const ParamPath& p) { return p.samples().size(); });
  m.def("standard_loop",
        [](const std::string& kind, std::size_t segments, double theta) {
          return standard_loop(loop_kind(kind), segments, theta);
        },
        py::arg("kind"), py::arg("M"), py::arg("theta") = 0.0);
  m.def("cone_loop", &cone_loop, py::arg("theta"), py::arg("M"));
  m.def("solid_angle", &solid_angle, py::arg("loop"));
  m.def("resample", &resample, py::arg("path"), py::arg("M"));

  // connection
  py::class_<SmoothBandFrame>(m, "SmoothBandFrame")
      .def_readonly("band_index", &SmoothBandFrame::band_index)
      .def_readonly("path", &SmoothBandFrame::path)
      .def_readonly("states", &SmoothBandFrame::states)
      .def_readonly("energies", &SmoothBandFrame::energies);
  m.def("band_frame", &band_frame, py::arg("model"), py::arg("path"), py::arg("band"),
        py::arg("tol") = kDefaultDegeneracyTol);
  m.def("loop_phase", py::overload_cast<const SmoothBandFrame&>(&loop_phase),
        py::arg("frame"));
  m.def("loop_phase",
        [](const ParametrizedHamiltonian& h, const ParamPath& path, int band) {
          return loop_phase(band_frame(h, path, band));
        },
        py::arg("model"), py::arg("path"), py::arg("band"));
  m.def("apply_gauge", &apply_gauge, py::arg("frame"), py::arg("gauge"));
  m.def("berry_connection_spin_half",
        [](double theta, double phi) {
          const auto a = berry_connection_spin_half(theta, phi);
          return py::make_tuple(a.a_theta, a.a_phi);
        },
        py::arg("theta"), py::arg("phi"));
  m.def("berry_curvature_plaquette", &berry_curvature_plaquette, py::arg("model"),
        py::arg("band"), py::arg("center"), py::arg("k"), py::arg("l"), py::arg("side"));
  m.def("berry_flux_sphere", &berry_flux_sphere, py::arg("model"), py::arg("band"),
        py::arg("radius") = 1.0, py::arg("n_theta") = 40, py::arg("n_phi") = 80);

  // adiabatic
  m.def("default_steps_per_segment", &default_steps_per_segment, py::arg("model"),
        py::arg("path"), py::arg("T"), py::arg("hbar") = 1.0);
  m.def("integrate_schedule",
        [](const ParametrizedHamiltonian& h, const ParamPath& path, double t,
           const StateVector& psi0, double hbar, int steps) {
          const auto run = integrate_schedule(
              h, EvolutionSchedule(path, t, steps_or_default(h, path, t, hbar, steps)), psi0,
              hbar);
          return py::make_tuple(run.psi_final, run.max_drift);
        },
        py::arg("model"), py::arg("path"), py::arg("T"), py::arg("psi0"),
        py::arg("hbar") = 1.0, py::arg("steps_per_segment") = 0,
        "Returns (psi(T), max norm drift).");
  m.def("phase_decomposition",
        [](const ParametrizedHamiltonian& h, const ParamPath& path, double t, int band,
           const StateVector& psi0, double hbar, int steps) {
          return report_dict(phase_decomposition(
              h, EvolutionSchedule(path, t, steps_or_default(h, path, t, hbar, steps)), band,
              psi0, hbar));
        },
        py::arg("model"), py::arg("path"), py::arg("T"), py::arg("band"), py::arg("psi0"),
        py::arg("hbar") = 1.0, py::arg("steps_per_segment") = 0);
  m.def("adiabatic_sweep",
        [](const ParametrizedHamiltonian& h, const ParamPath& path, int band,
           const StateVector& psi0, const std::vector<double>& times, double hbar, int steps) {
          std::vector<SweepRow> rows;
          {
            py::gil_scoped_release release;
            rows = adiabatic_sweep(h, path, band, psi0, hbar, times, steps);
          }
          py::list out;
          for (const auto& r : rows) {
            py::dict d;
            d["T"] = r.total_time;
            d["fidelity"] = r.fidelity;
            d["geometric_phase"] = r.geometric_phase;
            d["geometric_phase_error"] = r.geometric_phase_error;
            out.append(d);
          }
          return out;
        },
        py::arg("model"), py::arg("path"), py::arg("band"), py::arg("psi0"),
        py::arg("T_list"), py::arg("hbar") = 1.0, py::arg("steps_per_segment") = 0);
  m.def("aa_phase",
        [](const Protocol& protocol, double t, const StateVector& psi0, double hbar,
           int steps) { return report_dict(aa_phase(protocol, t, psi0, hbar, steps)); },
        py::arg("protocol"), py::arg("T"), py::arg("psi0"), py::arg("hbar") = 1.0,
        py::arg("steps") = 20000);
  m.def("schedule_protocol", &schedule_protocol, py::arg("model"), py::arg("path"),
        py::arg("T"));

  // bornopp
  m.def("induced_vector_potential",
        [](const ParametrizedHamiltonian& h, const ParameterPoint& r, double hbar,
           double fd_step) { return induced_vector_potential(h, r, hbar, fd_step); },
        py::arg("model"), py::arg("r"), py::arg("hbar") = 1.0, py::arg("fd_step") = 0.0);
  m.def("verify_gauge_conditions",
        [](const ParametrizedHamiltonian& h, const ParameterPoint& r,
           const std::vector<HermitianOperator>& a, double hbar) {
          const auto res = verify_gauge_conditions(h, r, a, hbar);
          return py::make_tuple(res.commutator, res.diagonal);
        },
        py::arg("model"), py::arg("r"), py::arg("A"), py::arg("hbar") = 1.0,
        "Returns (commutator residual, diagonal residual).");
  m.def("induced_scalar_potential",
        [](const ParametrizedHamiltonian& h, const ParameterPoint& r,
           const std::vector<HermitianOperator>& a, double mass) {
          SlowSector slow;
          slow.mass = mass;
          return induced_scalar_potential(h, r, a, slow);
        },
        py::arg("model"), py::arg("r"), py::arg("A"), py::arg("mass") = 1.0);
  m.def("induced_field",
        [](const ParametrizedHamiltonian& h, const ParameterPoint& r, double hbar,
           const std::string& norm) {
          return induced_field(h, r, hbar, 0.0, normalization(norm));
        },
        py::arg("model"), py::arg("r"), py::arg("hbar") = 1.0,
        py::arg("normalization") = "inverse_hbar");
  m.def("branch_flux_sphere",
        [](const ParametrizedHamiltonian& h, std::size_t cluster, double radius, int nt,
           int np, double hbar, const std::string& norm) {
          return branch_flux_sphere(h, cluster, radius, nt, np, hbar, normalization(norm));
        },
        py::arg("model"), py::arg("cluster"), py::arg("radius") = 1.0,
        py::arg("n_theta") = 40, py::arg("n_phi") = 80, py::arg("hbar") = 1.0,
        py::arg("normalization") = "inverse_hbar");

  // holonomy
  m.def("wilczek_zee_holonomy",
        [](const ParametrizedHamiltonian& h, const ParamPath& loop, std::size_t cluster) {
          return wilczek_zee_holonomy(h, loop, cluster).u;
        },
        py::arg("model"), py::arg("loop"), py::arg("cluster"));
  m.def("wilson_loop", [](const ComplexMatrix& u) { return wilson_loop({u}); }, py::arg("U"));
  m.def("holonomy_phases", [](const ComplexMatrix& u) { return holonomy_phases({u}); },
        py::arg("U"));
  m.def("unitarize", &unitarize, py::arg("overlap"));
  m.def("pancharatnam_chain", &pancharatnam_chain, py::arg("states"), py::arg("closed"));

  // scenarios
  m.def("run_scenario",
        [](const std::filesystem::path& config, const std::filesystem::path& out,
           std::optional<std::size_t> segments, std::optional<double> t,
           std::optional<double> hbar, std::optional<std::uint64_t> seed) {
          ScenarioOverrides ov{segments, t, hbar, seed};
          return run_scenario(config, out, ov);
        },
        py::arg("config"), py::arg("out"), py::arg("M") = py::none(),
        py::arg("T") = py::none(), py::arg("hbar") = py::none(),
        py::arg("seed") = py::none(), "Returns the exit code: 0, 1 or 2.");
}
