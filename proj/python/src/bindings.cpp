#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "fidsus/backend.hpp"
#include "fidsus/csv.hpp"
#include "fidsus/error.hpp"
#include "fidsus/fs_engine.hpp"
#include "fidsus/model_ising.hpp"
#include "fidsus/model_kitaev.hpp"
#include "fidsus/model_lmg.hpp"
#include "fidsus/reproduce.hpp"
#include "fidsus/scaling.hpp"
#include "fidsus/sweep.hpp"

namespace py = pybind11;
using namespace fidsus;

namespace {

FsEstimate run_engine(const ParametrizedHamiltonian& p, const std::string& method) {
  if (method == "spectral") return fs_spectral(p);
  if (method == "overlap") return fs_overlap(p);
  if (method == "correlator") return fs_correlator(p);
  throw Error(ErrorKind::ConfigError, "unknown method '" + method + "'");
}

SizeSweep make_sweep(const std::vector<double>& sizes, const std::vector<double>& chi, int system_dim) {
  if (sizes.size() != chi.size()) throw Error(ErrorKind::InvalidParams, "sizes and chi differ in length");
  SizeSweep s;
  s.system_dim = system_dim;
  for (std::size_t i = 0; i < sizes.size(); ++i) s.samples.push_back({sizes[i], chi[i]});
  return s;
}

py::dict qad_dict(const QadResult& q) {
  py::dict d;
  d["exponent"] = q.exponent;
  d["log_factor"] = q.has_log_factor;
  d["label"] = format_qad(q);
  d["amplitude"] = q.amplitude;
  d["fit_r2"] = q.fit_r2;
  d["residual_curvature"] = q.residual_curvature;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fidsus, m) {
  m.doc() = "Fidelity susceptibility of finite quantum many-body models";

  static py::exception<Error> error_type(m, "FidsusError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("kind") = std::string(name(e.kind()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  m.def("backend_ok", [] { return lapack_backend_status().ok; },
        "True when the LAPACK eigensolver self-test passes in this process.");
  m.def("blas_core", [] { return lapack_backend_status().blas_core; });

  m.def(
      "fs",
      [](const ComplexMatrix& h0, const ComplexMatrix& h_i, double lam, const std::string& method) {
        const ParametrizedHamiltonian p(HermitianOperator(h0), HermitianOperator(h_i), lam);
        return run_engine(p, method).value;
      },
      py::arg("h0"), py::arg("h_i"), py::arg("lam"), py::arg("method") = "spectral",
      "chi_F of H = h0 + lam * h_i by 'spectral', 'overlap' or 'correlator'.");

  m.def(
      "inequality_bounds",
      [](const ComplexMatrix& h0, const ComplexMatrix& h_i, double lam) {
        const auto b = inequality_bounds(ParametrizedHamiltonian(HermitianOperator(h0), HermitianOperator(h_i), lam));
        py::dict d;
        d["chi"] = b.chi;
        d["mid"] = b.mid;
        d["upper"] = b.upper;
        d["relevant_gap"] = b.relevant_gap;
        return d;
      },
      py::arg("h0"), py::arg("h_i"), py::arg("lam"));

  m.def(
      "lmg_fs",
      [](int n_spins, double field, double gamma, const std::string& method) {
        return run_engine(build_lmg({n_spins, gamma, field}), method).value;
      },
      py::arg("n_spins"), py::arg("field"), py::arg("gamma") = 0.0, py::arg("method") = "spectral");

  m.def(
      "ising_fs",
      [](int length, double field, const std::string& method) {
        if (method == "closed_form") return ising_fs_freefermion({length, field}).value;
        return run_engine(build_ising_ed({length, field}, IsingSector::EvenParity), method).value;
      },
      py::arg("length"), py::arg("field"), py::arg("method") = "closed_form");
  m.def("ising_density_limit", [](double h) { return ising_fs_density_limit(h); }, py::arg("field"));

  m.def(
      "kitaev_fs",
      [](int side, double jz, std::optional<double> jx, std::optional<double> jy, unsigned workers, bool extended) {
        KitaevCouplings c = KitaevCouplings::on_line(jz);
        if (jx || jy) {
          if (!(jx && jy)) throw Error(ErrorKind::InvalidParams, "give both jx and jy or neither");
          c = {*jx, *jy, jz};
        }
        return kitaev_fs_sum({side, c, true}, {workers, extended}).value;
      },
      py::arg("side"), py::arg("jz"), py::arg("jx") = py::none(), py::arg("jy") = py::none(),
      py::arg("workers") = 1, py::arg("extended") = false,
      "chi_F on the L x L grid; without jx, jy the couplings lie on jx = jy = (1 - jz) / 2.");
  m.def(
      "kitaev_fs_density",
      [](double jz) {
        const KitaevIntegral r = kitaev_fs_integral(KitaevCouplings::on_line(jz));
        return r.value;
      },
      py::arg("jz"), "Thermodynamic chi_F / L^2 on the jx = jy line; inf where it diverges.");
  m.def("kitaev_phase", [](double jz) { return std::string(name(kitaev_phase(KitaevCouplings::on_line(jz)))); },
        py::arg("jz"));

  m.def(
      "fit_power_law",
      [](const std::vector<double>& sizes, const std::vector<double>& chi, bool robust) {
        const PowerLawFit f = fit_power_law(make_sweep(sizes, chi, 1), robust);
        return py::make_tuple(f.exponent, f.amplitude, f.r2);
      },
      py::arg("sizes"), py::arg("chi"), py::arg("robust") = false, "(exponent, amplitude, r2)");
  m.def(
      "classify_qad",
      [](const std::vector<double>& sizes, const std::vector<double>& chi, int system_dim) {
        return qad_dict(classify_qad(make_sweep(sizes, chi, system_dim)));
      },
      py::arg("sizes"), py::arg("chi"), py::arg("system_dim") = 1);
  m.def("scaling_relation", &check_scaling_relation, py::arg("mu"), py::arg("nu"), py::arg("d_a"),
        "alpha = (mu - d_a) / nu");

  m.def(
      "reproduce",
      [](const std::string& target, unsigned workers, bool extended) {
        ReproduceRequest req = parse_reproduce_target(target);
        req.workers = workers;
        req.extended = extended;
        const ReproduceReport rep = reproduce(req);
        py::list checks;
        for (const Check& c : rep.checks) {
          py::dict d;
          d["id"] = c.id;
          d["value"] = c.value;
          d["expected"] = c.expected;
          d["status"] = std::string(name(c.status));
          d["note"] = c.note;
          checks.append(d);
        }
        py::dict out;
        out["csv"] = to_csv_string(rep.data);
        out["checks"] = checks;
        return out;
      },
      py::arg("target"), py::arg("workers") = 1, py::arg("extended") = false,
      "Runs a reproduction recipe ('fig1_left', 'fig1_right', 'table1:<row>').");
}
