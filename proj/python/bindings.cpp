#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "macrobell/bell.hpp"
#include "macrobell/distributions.hpp"
#include "macrobell/errors.hpp"
#include "macrobell/measurement.hpp"
#include "macrobell/oracle.hpp"
#include "macrobell/states.hpp"
#include "macrobell/version.hpp"

namespace py = pybind11;
using namespace macrobell;

namespace {

template <class D>
std::string csv_string(const D& d, const std::vector<std::string>& comments) {
  std::ostringstream os;
  write_csv(os, d, comments);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_macrobell, m) {
  m.doc() = "Bell-Clauser-Horne ratios for photon-number measurements under "
            "Gaussian readout noise";
  m.attr("__version__") = kVersion;

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NumericalGuardError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  py::class_<SchmidtState>(m, "SchmidtState")
      .def_readwrite("c", &SchmidtState::c)
      .def_readwrite("alpha", &SchmidtState::alpha)
      .def_readwrite("beta", &SchmidtState::beta)
      .def_readonly("r0", &SchmidtState::r0)
      .def_readonly("n_max", &SchmidtState::n_max);

  py::class_<SpinPairState>(m, "SpinPairState")
      .def_readonly("N", &SpinPairState::N);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("x_min", &GridSpec::x_min)
      .def_readwrite("x_max", &GridSpec::x_max)
      .def_readwrite("step", &GridSpec::step)
      .def("count", &GridSpec::count)
      .def("center", &GridSpec::center);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init([](double sigma, double eta) {
             return NoiseModel{sigma, eta};
           }),
           py::arg("sigma") = 0.0, py::arg("eta") = 1.0)
      .def_readwrite("sigma", &NoiseModel::sigma)
      .def_readwrite("eta", &NoiseModel::eta);

  py::class_<ChSettings>(m, "ChSettings")
      .def(py::init([](double theta, double phi, double theta_prime, double phi_prime) {
             return ChSettings{theta, phi, theta_prime, phi_prime};
           }),
           py::arg("theta"), py::arg("phi"), py::arg("theta_prime"), py::arg("phi_prime"))
      .def_readwrite("theta", &ChSettings::theta)
      .def_readwrite("phi", &ChSettings::phi)
      .def_readwrite("theta_prime", &ChSettings::theta_prime)
      .def_readwrite("phi_prime", &ChSettings::phi_prime);

  py::class_<ChEvaluation>(m, "ChEvaluation")
      .def_readonly("p_pp_theta_phi", &ChEvaluation::p_pp_theta_phi)
      .def_readonly("p_pp_theta_phip", &ChEvaluation::p_pp_theta_phip)
      .def_readonly("p_pp_thetap_phi", &ChEvaluation::p_pp_thetap_phi)
      .def_readonly("p_pp_thetap_phip", &ChEvaluation::p_pp_thetap_phip)
      .def_readonly("p_a", &ChEvaluation::p_a)
      .def_readonly("p_b", &ChEvaluation::p_b)
      .def_readonly("s", &ChEvaluation::s);

  py::class_<BinarizedProbs>(m, "BinarizedProbs")
      .def_readonly("p_pp", &BinarizedProbs::p_pp)
      .def_readonly("p_a", &BinarizedProbs::p_a)
      .def_readonly("p_b", &BinarizedProbs::p_b);

  py::class_<JointIntegerDistribution>(m, "JointIntegerDistribution")
      .def(py::init<int, int, int, int>(), py::arg("i_min"), py::arg("i_max"),
           py::arg("j_min"), py::arg("j_max"))
      .def("set", [](JointIntegerDistribution& d, int i, int j, double p) {
        d.at(i, j) = p;
      })
      .def("probability", &JointIntegerDistribution::probability)
      .def("i_min", &JointIntegerDistribution::i_min)
      .def("i_max", &JointIntegerDistribution::i_max)
      .def("j_min", &JointIntegerDistribution::j_min)
      .def("j_max", &JointIntegerDistribution::j_max)
      .def("mass", &JointIntegerDistribution::mass)
      .def("mass_deficit", &JointIntegerDistribution::mass_deficit)
      .def("marginal_a", &JointIntegerDistribution::marginal_a)
      .def("marginal_b", &JointIntegerDistribution::marginal_b)
      .def("to_csv", &csv_string<JointIntegerDistribution>,
           py::arg("comments") = std::vector<std::string>{});

  py::class_<JointQuadratureDensity>(m, "JointQuadratureDensity")
      .def("grid", &JointQuadratureDensity::grid)
      .def("value", &JointQuadratureDensity::value)
      .def("mass", &JointQuadratureDensity::mass)
      .def("mass_deficit", &JointQuadratureDensity::mass_deficit)
      .def("to_csv", &csv_string<JointQuadratureDensity>,
           py::arg("comments") = std::vector<std::string>{});

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("n_samples", &McEstimate::n_samples)
      .def_readonly("tally_pp", &McEstimate::tally_pp)
      .def_readonly("tally_a", &McEstimate::tally_a)
      .def_readonly("tally_b", &McEstimate::tally_b)
      .def_readonly("p_pp", &McEstimate::p_pp)
      .def_readonly("p_a", &McEstimate::p_a)
      .def_readonly("p_b", &McEstimate::p_b)
      .def_readonly("se_pp", &McEstimate::se_pp)
      .def_readonly("se_a", &McEstimate::se_a)
      .def_readonly("se_b", &McEstimate::se_b);

  py::class_<BellSource>(m, "BellSource");

  m.def("set_default_jobs", &set_default_jobs, py::arg("jobs"));
  m.def("pair_coherent_coeffs", &pair_coherent_coeffs, py::arg("r0"),
        py::arg("tail_tol") = 1e-10);
  m.def("spin_schmidt", &spin_schmidt, py::arg("N"));

  m.def("exact_joint_distribution", &exact_joint_distribution, py::arg("state"),
        py::arg("theta"), py::arg("phi"));
  m.def("quadrature_joint_density", &quadrature_joint_density, py::arg("state"),
        py::arg("theta"), py::arg("phi"), py::arg("grid") = GridSpec{});
  m.def("spin_joint_distribution", &spin_joint_distribution, py::arg("state"),
        py::arg("theta"), py::arg("phi"));
  m.def("apply_loss_quadrature",
        [](const JointQuadratureDensity& d, double eta) {
          return apply_loss_quadrature(d, LossChannel{eta});
        },
        py::arg("density"), py::arg("eta"));

  m.def("exact_source", &exact_source, py::arg("state"));
  m.def("quadrature_source", &quadrature_source, py::arg("state"),
        py::arg("grid") = GridSpec{});
  m.def("spin_source", &spin_source, py::arg("N"));

  m.def("binarized_probs",
        py::overload_cast<const JointIntegerDistribution&, const NoiseModel&>(
            &binarized_probs),
        py::arg("dist"), py::arg("noise"));
  m.def("binarized_probs",
        py::overload_cast<const JointQuadratureDensity&, const NoiseModel&>(
            &binarized_probs),
        py::arg("density"), py::arg("noise"));

  m.def("ch_ratio", &ch_ratio, py::arg("source"), py::arg("settings"),
        py::arg("noise"));
  m.def("sigma_cutoff", &sigma_cutoff, py::arg("source"), py::arg("settings"),
        py::arg("tol") = 1e-4);
  m.def("optimize_psi", &optimize_psi, py::arg("N"), py::arg("noise"));

  m.def("dense_state_and_measure", &dense_state_and_measure, py::arg("r0"),
        py::arg("alpha"), py::arg("theta"), py::arg("phi"), py::arg("cutoff"));
  m.def("mc_sample", &mc_sample, py::arg("dist"), py::arg("noise"),
        py::arg("n_samples"), py::arg("seed"));
  m.def("symbolic_spin_expand", &symbolic_spin_expand, py::arg("N"),
        py::arg("theta"), py::arg("phi"));
}
