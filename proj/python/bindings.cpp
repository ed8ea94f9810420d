#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypocert/bgk_sim.hpp"
#include "hypocert/decay_certificate.hpp"
#include "hypocert/hermite_basis.hpp"
#include "hypocert/hypo_index.hpp"
#include "hypocert/lyapunov_ansatz.hpp"
#include "hypocert/operator_assembly.hpp"
#include "hypocert/spectral_gap.hpp"

namespace py = pybind11;
using namespace hypocert;

namespace {

Variant parse_variant(const std::string& s) { return variant_from_string(s); }

py::dict certificate_dict(const DecayCertificate& c) {
  py::dict d;
  d["d"] = c.d;
  d["L"] = c.L;
  d["alpha_plus"] = c.alpha_plus;
  d["alpha_star"] = c.alpha_star;
  d["mu"] = c.mu;
  d["lambda"] = c.lambda;
  d["c_d"] = c.c_d;
  d["C_d"] = c.C_d;
  d["valid"] = c.valid;
  py::list ver;
  for (const auto& v : c.verified) ver.append(py::make_tuple(v.kappa, v.min_eig));
  d["verified"] = ver;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hypocert, m) {
  m.doc() = "Hermite-spectral hypocoercivity certificates for linearised BGK models";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.def("lex_index", &lex_index, py::arg("m"));
  m.def("multi_index", &multi_index, py::arg("n"), py::arg("d"));
  m.def("basis_change_matrix", &basis_change_matrix, py::arg("d"), py::arg("N"));
  m.def("gauss_hermite", [](int n) {
    const Quadrature q = gauss_hermite(n);
    return py::make_tuple(q.nodes, q.weights);
  }, py::arg("n"));

  m.def("build_L1", [](int d, const std::string& basis, int N) { return build_L1(d, parse_variant(basis), N); },
        py::arg("d"), py::arg("basis") = "tensor", py::arg("N"));
  m.def("build_L2", [](int d, const std::string& basis, int N) { return build_L2(d, parse_variant(basis), N); },
        py::arg("d"), py::arg("basis") = "tensor", py::arg("N"));
  m.def("modal_generator", [](int d, const std::string& basis, int N, double L, double kappa) {
    return modal_generator(OperatorPair::bgk(d, parse_variant(basis), N, L), kappa).C;
  }, py::arg("d"), py::arg("basis"), py::arg("N"), py::arg("L"), py::arg("kappa"));

  m.def("hypocoercivity_index", [](const CMatrix& C1, const CMatrix& C2, double tol) {
    const IndexReport r = hypocoercivity_index(C1, C2, tol);
    py::dict d;
    d["tau"] = r.tau ? py::cast(*r.tau) : py::none();
    d["rank_profile"] = r.rank_profile;
    d["kernel_dim"] = r.kernel_dim;
    d["coercivity_constant"] = r.coercivity_constant;
    return d;
  }, py::arg("C1"), py::arg("C2"), py::arg("tol") = 1e-10);

  m.def("eigenvalues", [](const CMatrix& M) { return complex_eigenvalues(M).values; }, py::arg("M"));
  m.def("spectral_gap", [](int d, double L, const std::vector<double>& kappas, int N) {
    const GapReport r = spectral_gap(d, L, kappas, N);
    py::list out;
    for (const auto& e : r.entries) out.append(py::make_tuple(e.kappa, e.gap));
    return out;
  }, py::arg("d"), py::arg("L"), py::arg("kappas"), py::arg("N"));

  m.def("bgk_P", py::overload_cast<int, double, double, int>(&bgk_P), py::arg("d"), py::arg("kappa"),
        py::arg("alpha"), py::arg("N") = 0);
  m.def("optimal_P", [](const CMatrix& C) { return optimal_P(C); }, py::arg("C"));

  m.def("minors", [](int d, double kappa, double alpha, double ell) { return minors(d, kappa, alpha, ell).delta; },
        py::arg("d"), py::arg("kappa"), py::arg("alpha"), py::arg("ell"));
  m.def("assemble_D_block", &assemble_D_block, py::arg("d"), py::arg("kappa"), py::arg("alpha"), py::arg("ell"));
  m.def("alpha3_1d", &alpha3_1d, py::arg("L"));
  m.def("certify", [](int d, double L, int verify_moduli) { return certificate_dict(certify(d, L, verify_moduli)); },
        py::arg("d"), py::arg("L"), py::arg("verify_moduli") = 50);

  m.def("simulate", [](double L, double eps, int kmax, int N, double tmax, double dt) {
    SimConfig c;
    c.L = L;
    c.eps = eps;
    c.kmax = kmax;
    c.N = N;
    c.tmax = tmax;
    c.dt = dt;
    const Trajectory tr = simulate(c);
    py::dict d;
    std::vector<double> t, e, l1;
    for (const auto& r : tr.rows) {
      t.push_back(r.t);
      e.push_back(r.entropy);
      l1.push_back(r.l1);
    }
    d["t"] = t;
    d["entropy"] = e;
    d["l1"] = l1;
    d["lambda"] = tr.lambda;
    d["E0"] = tr.E0;
    d["t_init"] = tr.t_init;
    return d;
  }, py::arg("L"), py::arg("eps") = 0.02, py::arg("kmax") = 64, py::arg("N") = 32, py::arg("tmax") = 20.0,
     py::arg("dt") = 1.0);
}
