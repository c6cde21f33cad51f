#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "vsi/catalog.hpp"
#include "vsi/group.hpp"
#include "vsi/scenario.hpp"
#include "vsi/soc.hpp"
#include "vsi/verify.hpp"
#include "vsi/vibronic.hpp"

namespace py = pybind11;
using namespace vsi;

namespace {

py::list py_states() {
  py::list out;
  for (const CatalogState& st : shared_catalog().states()) {
    py::dict d;
    d["name"] = st.name;
    d["family"] = st.family;
    d["config"] = config_name(st.config);
    d["spin"] = st.spin;
    d["ms"] = ms_label(st.ms, st.ms_mixed);
    d["irrep"] = irrep_name(st.gamma);
    d["orbital_irrep"] = irrep_name(st.gamma_orb);
    d["spin_irrep"] = irrep_name(st.gamma_spin);
    out.append(d);
  }
  return out;
}

py::dict py_character_table() {
  static const char* classes[] = {"E", "Eb", "2C3", "2C3b", "3sv", "3svb"};
  static const int reps[] = {0, 6, 1, 7, 3, 9};
  py::dict out;
  py::list cls, irreps, rows;
  for (const char* c : classes) cls.append(c);
  for (int g = 0; g < kNumIrreps; ++g) {
    irreps.append(irrep_name(static_cast<Irrep>(g)));
    py::list row;
    for (int rep : reps) row.append(character(static_cast<Irrep>(g), rep));
    rows.append(row);
  }
  out["classes"] = cls;
  out["irreps"] = irreps;
  out["table"] = rows;
  return out;
}

py::dict py_cgc(const std::string& a, const std::string& b,
                const std::string& g) {
  CgcTensor t =
      solve_cgc(irrep_from_name(a), irrep_from_name(b), irrep_from_name(g));
  int da = irrep_dim(t.a), db = irrep_dim(t.b), dg = irrep_dim(t.g);
  py::dict out;
  out["mult"] = t.mult;
  py::list coeff;
  for (int s = 0; s < t.mult; ++s) {
    py::list per_m;
    for (int m = 0; m < dg; ++m) {
      py::list rows;
      for (int i = 0; i < da; ++i) {
        py::list row;
        for (int k = 0; k < db; ++k) row.append(t(s, i, k, m));
        rows.append(row);
      }
      per_m.append(rows);
    }
    coeff.append(per_m);
  }
  out["coeff"] = coeff;
  return out;
}

py::dict py_soc_table() {
  const Catalog& cat = shared_catalog();
  SocTable t = golden_soc_table(cat);
  py::dict out;
  out["row_names"] = t.row_names;
  out["col_names"] = t.col_names;
  py::list entries;
  for (const TableEntry& e : t.entries) {
    py::dict d;
    d["row"] = t.row_names[e.row];
    d["col"] = t.col_names[e.col];
    d["coeff"] = e.coeff;
    d["channel"] = soc_channel_name(e.channel);
    d["dagger"] = e.dagger;
    d["erratum"] = e.erratum;
    entries.append(d);
  }
  out["entries"] = entries;
  return out;
}

py::dict check_to_dict(const CheckResult& c) {
  py::dict d;
  d["name"] = c.name;
  d["passed"] = c.passed;
  d["detail"] = c.detail;
  return d;
}

py::list py_verify(double lambda_perturbation, double sigma) {
  VerifyOptions opts;
  opts.lambda_perturbation = lambda_perturbation;
  opts.sigma = sigma;
  py::list out;
  for (const CheckResult& c : verify_suite(opts)) out.append(check_to_dict(c));
  return out;
}

double py_isc_rate(double lam, double delta, double mode_energy,
                   double huang_rhys, double sigma, double nbar,
                   int max_quanta, double alpha) {
  VibronicModel m{mode_energy, huang_rhys, sigma, nbar, max_quanta};
  return isc_rate_first_order(lam, m, delta, alpha);
}

double py_fc_overlap(int m, int n, double huang_rhys) {
  VibronicModel model;
  model.huang_rhys = huang_rhys;
  return fc_overlap(model, m, n);
}

std::string config_text(const py::object& config) {
  if (py::isinstance<py::str>(config)) return config.cast<std::string>();
  return py::module_::import("json").attr("dumps")(config).cast<std::string>();
}

py::list py_simulate(const py::object& config) {
  ScenarioConfig cfg = parse_config(config_text(config), "<python>");
  py::list out;
  for (const ScenarioInstance& inst : expand_sweep(cfg)) {
    RunResult res = run_scenario(inst.config);
    py::dict d;
    d["label"] = inst.label;
    py::list report;
    for (const auto& [k, v] : res.report.fields)
      report.append(py::make_tuple(k, v));
    d["report"] = report;
    d["levels"] = res.model.scheme.levels;
    d["times"] = res.trajectory.times;
    d["populations"] = res.trajectory.populations;
    d["polarization"] = res.trajectory.polarization;
    py::dict steady;
    for (int i = 0; i < res.model.scheme.size(); ++i)
      steady[py::str(res.model.scheme.levels[i])] = res.steady(i, i).real();
    d["steady"] = steady;
    py::dict post;
    post["g_12"] = res.post_pump.g12;
    post["g_32"] = res.post_pump.g32;
    d["post_pump"] = post;
    d["csv"] = trajectory_csv(res.model, res.trajectory);
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "three-hole color-center states, couplings and spin dynamics";

  m.def("states", &py_states,
        "Symmetry-adapted state catalog: 44 named states plus 12 residuals.");
  m.def("character_table", &py_character_table,
        "Double-group character table over class representatives.");
  m.def("cgc", &py_cgc, py::arg("a"), py::arg("b"), py::arg("g"),
        "Coupling coefficients resolving irrep g inside the product a x b.");
  m.def("soc_table", &py_soc_table,
        "Reference spin-orbit coupling table entries.");
  m.def("catalog_check", [] { return check_to_dict(catalog_check()); },
        "Re-derives the catalog and confirms its sector memberships.");
  m.def("coupling_table_check",
        [](double perturb) {
          return check_to_dict(coupling_table_check(perturb));
        },
        py::arg("lambda_perturbation") = 0.0,
        "Compares the computed coupling table against the reference.");
  m.def("verify", &py_verify, py::arg("lambda_perturbation") = 0.0,
        py::arg("sigma") = 1.0,
        "Full self-check suite; returns one dict per check.");
  m.def("fc_overlap", &py_fc_overlap, py::arg("m"), py::arg("n"),
        py::arg("huang_rhys") = 1.0,
        "Displaced-ladder vibrational overlap <m|n'>.");
  m.def("isc_rate_first_order", &py_isc_rate, py::arg("lam"),
        py::arg("delta"), py::arg("mode_energy") = 172.0,
        py::arg("huang_rhys") = 1.0, py::arg("sigma") = 1.0,
        py::arg("nbar") = 0.0, py::arg("max_quanta") = 60,
        py::arg("alpha") = 1.0,
        "First-order crossing rate at electronic drop delta (meV).");
  m.def("simulate", &py_simulate, py::arg("config"),
        "Runs the configured protocol(s); accepts a JSON string or a dict "
        "and returns one result dict per scenario instance.");

  m.attr("__version__") = "1.0.0";
}
