// Python bindings. Every entry point speaks JSON strings matching the file
// schemas of the CLI; the package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "onecircuit/exotic.hpp"
#include "onecircuit/json_io.hpp"
#include "onecircuit/scenarios.hpp"

namespace py = pybind11;
using namespace onecircuit;

namespace {

using Real = HighPrec;

std::string asc_measure_json(double a, double q, long atoms, const std::string& which) {
  const QPair<Real> p{Real(a), Real(q)};
  const auto m = which == "gamma" ? asc_gamma_measure(p, atoms) : asc_beta_measure(p, atoms);
  return measure_to_json(m).dump();
}

std::string quartic_pair_json(long atoms) {
  auto [zeta, rho] = quartic_pair<Real>(atoms);
  Json j;
  j["zeta"] = measure_to_json(zeta);
  j["rho"] = measure_to_json(rho);
  return j.dump();
}

double asc_moment_py(double a, double q, long n) {
  return to_double(asc_moment(QPair<Real>{Real(a), Real(q)}, n));
}

std::string measure_moments_json(const std::string& measure, long max_n) {
  const auto m = measure_from_json<Real>(Json::parse(measure));
  return sequence_to_json(moments_of(m, max_n)).dump();
}

std::string pushforward_json(const std::string& measure, double scale, double shift) {
  const auto m = measure_from_json<Real>(Json::parse(measure));
  return measure_to_json(pushforward(m, Homothety<Real>{Real(scale), Real(shift)})).dump();
}

std::string hankel_json(const std::vector<double>& values, double tol) {
  MomentSequence<Real> s;
  for (double v : values) s.values.push_back(Real(v));
  return hankel_report_to_json(hankel_report(s, Real(tol))).dump();
}

std::string shift_dominance_json(const std::vector<double>& values, double tol) {
  MomentSequence<Real> s;
  for (double v : values) s.values.push_back(Real(v));
  const auto rep = shift_dominance(s, Real(tol));
  Json j;
  j["pass"] = rep.pass;
  j["failure_in_differences"] = rep.failure_in_differences;
  j["failing_order"] = rep.failing_order;
  j["failing_minor_det"] = to_double(rep.failing_minor_det);
  return j.dump();
}

std::vector<double> transform_py(const std::vector<double>& values, double scale, double shift,
                                 const std::string& direction) {
  MomentSequence<double> s;
  s.values = values;
  const auto out = transform_T(s, Homothety<double>{scale, shift},
                               direction == "inverse" ? TransformDirection::Inverse
                                                      : TransformDirection::Forward);
  return out.values;
}

std::string carleman_json(const std::vector<double>& values) {
  MomentSequence<double> s;
  s.values = values;
  const auto d = carleman_diagnostic(s);
  Json j;
  j["growth_class"] = to_string(d.growth_class);
  j["note"] = d.note;
  j["partial_sums"] = d.partial_sums;
  return j.dump();
}

std::string stieltjes_class_py(double inf_supp, double scale, double shift) {
  return to_string(stieltjes_class_of_transform(inf_supp, Homothety<double>{scale, shift}));
}

std::vector<std::string> iterated_preimage_py(std::int64_t eta, std::int64_t kappa,
                                              std::int64_t depth, std::int64_t n) {
  const auto sh = GraphShape::finite(eta, kappa, depth);
  std::vector<std::string> out;
  for (const auto& v : iterated_preimage_xkappa_closed(sh, n).vertices)
    out.push_back(v.to_string());
  return out;
}

std::string build_subnormal_json(const std::string& seeds_json, long kappa,
                                 const std::vector<double>& weights, py::object mu_x0,
                                 long branch_depth) {
  std::vector<AtomicMeasure<Real>> seeds;
  for (const auto& s : Json::parse(seeds_json)) seeds.push_back(measure_from_json<Real>(s));
  std::vector<Real> w;
  for (double x : weights) w.push_back(Real(x));
  std::optional<Real> mu0;
  if (!mu_x0.is_none()) mu0 = Real(mu_x0.cast<double>());
  const auto build = build_subnormal(seeds, kappa, mu0, w, branch_depth);
  Json j;
  j["model"] = model_to_json(build.model);
  j["family"] = family_to_json(build.family);
  j["Theta"] = to_double(build.report.Theta);
  j["vartheta"] = to_double(build.report.vartheta);
  j["cc_residual"] = to_double(build.report.cc_residual);
  return j.dump();
}

std::string verify_cc_json(const std::string& model_json, const std::string& family_json) {
  const auto model = model_from_json<Real>(Json::parse(model_json));
  const auto family = family_from_json<Real>(Json::parse(family_json));
  const auto res = verify_cc(model, family);
  Json j;
  j["max_residual"] = to_double(res.max_residual);
  if (res.failing_vertex) j["worst_vertex"] = res.failing_vertex->to_string();
  j["truncation_caveat"] = res.truncation_caveat;
  return j.dump();
}

std::string h_table_json(const std::string& model_json, long max_n) {
  const auto model = model_from_json<Real>(Json::parse(model_json));
  RnTable<Real> table(model, max_n);
  Json j = Json::array();
  for (const auto& v : model.shape.vertices()) {
    Json row;
    row["vertex"] = v.to_string();
    row["h"] = Json::array();
    for (long n = 0; n <= max_n; ++n) {
      try {
        row["h"].push_back(to_double(table.value(v, n).value));
      } catch (const Error&) {
        row["h"].push_back(nullptr);
      }
    }
    j.push_back(std::move(row));
  }
  return j.dump();
}

std::string check_hyponormal_json(const std::string& model_json, double tol) {
  const auto model = model_from_json<Real>(Json::parse(model_json));
  const auto rep = hyponormality(model, Real(tol));
  Json j;
  j["verdict"] = to_string(rep.verdict);
  j["worst_vertex"] = rep.worst_vertex.to_string();
  j["worst_slack"] = to_double(rep.worst_slack);
  if (rep.loop_test_left) {
    j["loop_test_left"] = to_double(*rep.loop_test_left);
    j["loop_test_right"] = to_double(*rep.loop_test_right);
  }
  return j.dump();
}

std::string exotic_pipeline_json(const std::string& eta, const std::string& source, long atoms) {
  ExoticSource<Real> src;
  if (source.rfind("asc:", 0) == 0) {
    src.kind = ExoticSourceKind::ASC;
    const auto rest = source.substr(4);
    const auto comma = rest.find(',');
    src.a = Real(std::stod(rest.substr(0, comma)));
    src.q = Real(std::stod(rest.substr(comma + 1)));
  }
  const bool inf = eta == "inf";
  const auto rep =
      exotic_pipeline<Real>(inf ? 0 : std::stoll(eta), inf, src,
                             atoms > 0 ? atoms : (src.kind == ExoticSourceKind::ASC ? 40 : 12));
  Json j;
  j["xi"] = to_double(rep.build.diagnostics.xi);
  j["beta_min_atom_mass"] = to_double(rep.beta_min_atom_mass);
  j["homothety_parameter"] = to_double(rep.homothety_parameter);
  j["verdict"] = to_string(rep.hyponormality.verdict);
  j["worst_slack"] = to_double(rep.hyponormality.worst_slack);
  j["id_violated"] = rep.id_violated;
  j["id_defect"] = to_double(rep.id_defect);
  j["hankel_evidence"] = Json::array();
  for (const auto& [v, verdict] : rep.hankel_evidence)
    j["hankel_evidence"].push_back({v.to_string(), to_string(verdict)});
  j["model"] = model_to_json(rep.build.model);
  return j.dump();
}

std::string lambda_json(const std::string& tau_json,
                        const std::vector<std::vector<std::size_t>>& blocks, int tail_block) {
  const auto tau = measure_from_json<Real>(Json::parse(tau_json));
  Partition part;
  part.blocks = blocks;
  part.tail_block = tail_block;
  const auto res = lambda_functional(tau, part);
  Json j;
  j["value"] = to_double(res.value);
  j["inf_bound"] = to_double(res.inf_bound);
  j["sup_bound"] = to_double(res.sup_bound);
  return j.dump();
}

std::string euler_threshold_json(double a, double grid_step) {
  const auto res = euler_threshold(Real(a), Real(grid_step));
  Json j;
  j["q0"] = to_double(res.q0);
  j["pentagonal_ok"] = res.pentagonal_ok;
  j["prefix_monotone_true"] = res.prefix_monotone_true;
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "composition operators over one-circuit graphs (JSON-speaking core)";

  m.def("asc_measure", &asc_measure_json, py::arg("a"), py::arg("q"), py::arg("atoms") = 40,
        py::arg("which") = "beta");
  m.def("quartic_pair", &quartic_pair_json, py::arg("atoms") = 12);
  m.def("asc_moment", &asc_moment_py, py::arg("a"), py::arg("q"), py::arg("n"));
  m.def("measure_moments", &measure_moments_json, py::arg("measure"), py::arg("max_n"));
  m.def("pushforward", &pushforward_json, py::arg("measure"), py::arg("scale"), py::arg("shift"));
  m.def("hankel_report", &hankel_json, py::arg("values"), py::arg("tol") = 1e-30);
  m.def("shift_dominance", &shift_dominance_json, py::arg("values"), py::arg("tol") = 1e-30);
  m.def("transform", &transform_py, py::arg("values"), py::arg("scale"), py::arg("shift"),
        py::arg("direction") = "forward");
  m.def("carleman", &carleman_json, py::arg("values"));
  m.def("stieltjes_class_of_transform", &stieltjes_class_py, py::arg("inf_supp_friedrichs"), py::arg("scale"),
        py::arg("shift"));
  m.def("iterated_preimage", &iterated_preimage_py, py::arg("eta"), py::arg("kappa"),
        py::arg("branch_depth"), py::arg("n"));
  m.def("build_subnormal", &build_subnormal_json, py::arg("seeds"), py::arg("kappa"),
        py::arg("weights"), py::arg("mu_x0") = py::none(), py::arg("branch_depth") = 24);
  m.def("verify_cc", &verify_cc_json, py::arg("model"), py::arg("family"));
  m.def("h_table", &h_table_json, py::arg("model"), py::arg("max_n"));
  m.def("check_hyponormal", &check_hyponormal_json, py::arg("model"), py::arg("tol") = 1e-30);
  m.def("exotic_pipeline", &exotic_pipeline_json, py::arg("eta") = "2",
        py::arg("source") = "quartic", py::arg("atoms") = 0);
  m.def("lambda_functional", &lambda_json, py::arg("tau"), py::arg("blocks"),
        py::arg("tail_block") = -1);
  m.def("euler_threshold", &euler_threshold_json, py::arg("a"), py::arg("grid_step") = 1e-3);
}
