#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "qes/bethe.hpp"
#include "qes/cli.hpp"
#include "qes/errors.hpp"
#include "qes/ode_oracle.hpp"
#include "qes/qes_solver.hpp"
#include "qes/semiclassical.hpp"
#include "qes/wavefunction.hpp"

namespace py = pybind11;
using namespace qes;

namespace {

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"qes"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Planar Dirac electron in Coulomb plus uniform magnetic field: QES levels and checks.";

  // Messages start with the error kind, e.g. "InvalidParams: ...".
  py::register_exception<Error>(m, "QesError", PyExc_RuntimeError);

  py::class_<Params>(m, "Params")
      .def(py::init<double, int, double>(), py::arg("z_alpha"), py::arg("l"), py::arg("m") = 1.0)
      .def_property_readonly("z_alpha", &Params::z_alpha)
      .def_property_readonly("l", &Params::l)
      .def_property_readonly("m", &Params::m)
      .def_property_readonly("j", &Params::j)
      .def("__repr__", [](const Params& p) {
        return "Params(z_alpha=" + std::to_string(p.z_alpha()) + ", l=" + std::to_string(p.l()) +
               ", m=" + std::to_string(p.m()) + ")";
      });

  py::enum_<Branch>(m, "Branch")
      .value("PositiveEnergy", Branch::PositiveEnergy)
      .value("NegativeEnergy", Branch::NegativeEnergy);

  py::class_<QesLevel>(m, "QesLevel")
      .def_readonly("n", &QesLevel::n)
      .def_readonly("params", &QesLevel::params)
      .def_property_readonly("gamma", [](const QesLevel& l) { return l.gamma.value; })
      .def_readonly("energy", &QesLevel::energy)
      .def_readonly("field_param", &QesLevel::field_param)
      .def_property_readonly("alphas", [](const QesLevel& l) { return l.coefficients.alphas; })
      .def_property_readonly("betas", [](const QesLevel& l) { return l.coefficients.betas; })
      .def_readonly("branch", &QesLevel::branch)
      .def_property_readonly("variant", [](const QesLevel& l) { return std::string(to_string(l.variant)); })
      .def("termination_residual", &QesLevel::termination_residual)
      .def("field_relation_residual", &QesLevel::field_relation_residual)
      .def("terminates", &QesLevel::terminates)
      .def("__repr__", [](const QesLevel& l) {
        return "QesLevel(n=" + std::to_string(l.n) + ", E=" + std::to_string(l.energy) +
               ", a=" + std::to_string(l.field_param) + ")";
      });

  m.def("solve", [](int n, const Params& p) { return solve(n, p); }, py::arg("n"), py::arg("params"),
        "QES levels for termination index n (closed forms for n <= 3, scan otherwise).");
  m.def("critical_zalpha_n2", &critical_zalpha_n2, py::arg("l"));
  m.def("termination_function", &termination_function, py::arg("n"), py::arg("params"), py::arg("energy"));

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("matching_residual", &VerificationReport::matching_residual)
      .def_readonly("tail_exponent", &VerificationReport::tail_exponent)
      .def_readonly("tail_relative_error", &VerificationReport::tail_relative_error)
      .def_readonly("nodes_f", &VerificationReport::nodes_f)
      .def_readonly("passed", &VerificationReport::passed);

  m.def("verify", [](const QesLevel& l) { return verify(l); }, py::arg("level"),
        "Shooting check of a level against the radial ODE.");
  m.def("verify_candidate",
        [](const Params& p, double e, double a) { return verify_candidate(p, e, a); },
        py::arg("params"), py::arg("energy"), py::arg("field_param"));
  m.def("evaluate", [](const QesLevel& l, double r) {
    const RadialValue v = evaluate(l, r);
    return py::make_tuple(v.F, v.G);
  }, py::arg("level"), py::arg("r"));
  m.def("count_nodes", [](const QesLevel& l) {
    const NodeCount c = count_nodes(l);
    return py::make_tuple(c.f, c.g);
  }, py::arg("level"));

  py::class_<CoulombField>(m, "CoulombField")
      .def(py::init<double, double>(), py::arg("z_alpha"), py::arg("m") = 1.0)
      .def_property_readonly("bohr_radius", &CoulombField::bohr_radius)
      .def_property_readonly("critical_field_param", &CoulombField::critical_field_param);
  m.def("coulomb_spectrum", &coulomb_spectrum, py::arg("field"), py::arg("n_r"), py::arg("l"));
  m.def("ground_state_energy", &ground_state_energy, py::arg("field"));
  m.def("weak_field_spectrum", &weak_field_spectrum, py::arg("field"), py::arg("n_r"), py::arg("l"),
        py::arg("field_param"));
  m.def("nonrel_spectrum", &nonrel_spectrum, py::arg("field"), py::arg("n_r"), py::arg("l"),
        py::arg("field_param"));
  m.def("quantization_integral", &quantization_integral, py::arg("field"), py::arg("l"),
        py::arg("energy"), py::arg("field_param"));

  py::enum_<Coulomb>(m, "Coulomb")
      .value("Attractive", Coulomb::Attractive)
      .value("Repulsive", Coulomb::Repulsive);

  py::class_<BetheProblem>(m, "BetheProblem")
      .def(py::init([](int l, int s, Coulomb sign, double z, double mass) {
             BetheProblem p{l, s, sign, z, mass};
             p.validate();
             return p;
           }),
           py::arg("l"), py::arg("s"), py::arg("sign"), py::arg("z_alpha") = 0.1, py::arg("m") = 1.0)
      .def_readonly("l", &BetheProblem::l)
      .def_readonly("s", &BetheProblem::s)
      .def_readonly("sign", &BetheProblem::sign);

  py::class_<BetheSolution>(m, "BetheSolution")
      .def_readonly("zeros", &BetheSolution::zeros)
      .def_readonly("b", &BetheSolution::b)
      .def_readonly("omega_l", &BetheSolution::omega_l)
      .def_readonly("energy", &BetheSolution::energy)
      .def_readonly("bethe_residual", &BetheSolution::bethe_residual)
      .def_property_readonly("nodes", [](const BetheSolution& s) { return BetheWavefunction(s).nodes(); });

  m.def("solve_bethe",
        [](const BetheProblem& p, int starts, std::uint64_t seed) {
          BetheOptions o;
          o.starts = starts;
          o.seed = seed;
          return solve_bethe(p, o).solutions;
        },
        py::arg("problem"), py::arg("starts") = 50, py::arg("seed") = 0);
  m.def("closed_form", &closed_form, py::arg("problem"));
  m.def("factorization_residual",
        [](const BetheSolution& s) { return factorization_residual(s); }, py::arg("solution"));

  m.def("run_cli", &run_cli, py::arg("args"),
        "Runs the qes command line in-process; returns (exit_code, stdout, stderr).");
  m.attr("__version__") = std::string(cli::kVersion);
}
