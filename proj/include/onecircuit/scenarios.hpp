#ifndef ONECIRCUIT_SCENARIOS_HPP
#define ONECIRCUIT_SCENARIOS_HPP

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "onecircuit/json_io.hpp"
#include "onecircuit/qspecial.hpp"

namespace onecircuit {

// One CLI invocation. Collected by the argument parser, executed by
// run_scenario; every command reads/writes the JSON schemas above.
struct ScenarioConfig {
  std::string command;
  std::vector<std::string> inputs;  // positional file paths

  bool high_precision = true;
  double tol = 0;  // 0 = per-command default (see resolve_tol)
  long max_n = 12;
  long atoms = 0;  // 0 = command default
  double a = 0, q = 0, scale = 1, shift = 0;
  double grid_step = 1e-3;
  std::string which;      // beta|gamma / zeta|rho
  std::string source;     // quartic | asc:a,q
  std::string direction = "forward";
  std::string eta = "1";
  long kappa = 0;
  long branch_depth = 0;  // 0 = command default
  bool csv = false;
  std::string out, report_path;
};

namespace scenario_detail {

// Eigenvalue thresholds track the scalar precision; balance residuals have
// a fixed budget because the constructions are exact modulo rounding.
inline double resolve_tol(const ScenarioConfig& cfg) {
  if (cfg.tol > 0) return cfg.tol;
  if (cfg.command == "verify-cc" || cfg.command == "build-subnormal") return 1e-10;
  return cfg.high_precision ? 1e-30 : 1e-9;
}

inline void emit(const std::string& path, const Json& j) {
  if (path.empty())
    std::cout << j.dump(2) << "\n";
  else
    save_json(path, j);
}

template <class Real>
Json hyponormality_to_json(const HyponormalityReport<Real>& rep) {
  Json j;
  j["verdict"] = to_string(rep.verdict);
  j["worst_vertex"] = rep.worst_vertex.to_string();
  j["worst_slack"] = to_double(rep.worst_slack);
  j["truncation_caveat"] = rep.truncation_caveat;
  if (rep.loop_test_left) {
    j["loop_test_left"] = to_double(*rep.loop_test_left);
    j["loop_test_right"] = to_double(*rep.loop_test_right);
  }
  j["slacks"] = Json::array();
  for (const auto& [v, s] : rep.per_vertex_slack)
    j["slacks"].push_back({v.to_string(), to_double(s)});
  return j;
}

template <class Real>
int run_typed(const ScenarioConfig& cfg) {
  const double tol_d = resolve_tol(cfg);
  const Real tol(tol_d);

  if (cfg.command == "asc-measure") {
    const QPair<Real> p{Real(cfg.a), Real(cfg.q)};
    const long n = cfg.atoms > 0 ? cfg.atoms : 40;
    const auto m = cfg.which == "gamma" ? asc_gamma_measure(p, n) : asc_beta_measure(p, n);
    emit(cfg.out, measure_to_json(m));
    return 0;
  }

  if (cfg.command == "quartic") {
    const long n = cfg.atoms > 0 ? cfg.atoms : 12;
    auto [zeta, rho] = quartic_pair<Real>(n);
    emit(cfg.out, measure_to_json(cfg.which == "rho" ? rho : zeta));
    return 0;
  }

  if (cfg.command == "euler-threshold") {
    const auto res = euler_threshold(Real(cfg.a), Real(cfg.grid_step));
    Json j;
    j["a"] = cfg.a;
    j["q0"] = to_double(res.q0);
    j["tested_points"] = res.tested_q.size();
    j["pentagonal_ok"] = res.pentagonal_ok;
    j["prefix_monotone_true"] = res.prefix_monotone_true;
    emit(cfg.out, j);
    return 0;
  }

  if (cfg.command == "hankel") {
    const auto seq = sequence_from_json<Real>(load_json(cfg.inputs.at(0)));
    emit(cfg.out, hankel_report_to_json(hankel_report(seq, tol)));
    return 0;
  }

  if (cfg.command == "carleman") {
    const auto seq = sequence_from_json<Real>(load_json(cfg.inputs.at(0)));
    const auto d = carleman_diagnostic(seq);
    Json j;
    j["growth_class"] = to_string(d.growth_class);
    j["note"] = d.note;
    j["partial_sums"] = Json::array();
    for (const auto& s : d.partial_sums) j["partial_sums"].push_back(to_double(s));
    emit(cfg.out, j);
    return 0;
  }

  if (cfg.command == "transform") {
    const auto seq = sequence_from_json<Real>(load_json(cfg.inputs.at(0)));
    const Homothety<Real> h{Real(cfg.scale), Real(cfg.shift)};
    const auto dir = cfg.direction == "inverse" ? TransformDirection::Inverse
                                                : TransformDirection::Forward;
    emit(cfg.out, sequence_to_json(transform_T(seq, h, dir)));
    return 0;
  }

  if (cfg.command == "verify-cc") {
    const auto model = model_from_json<Real>(load_json(cfg.inputs.at(0)));
    const auto family = family_from_json<Real>(load_json(cfg.inputs.at(1)));
    const auto res = verify_cc(model, family);
    Json j;
    j["max_residual"] = to_double(res.max_residual);
    j["tol"] = tol_d;
    j["pass"] = to_double(res.max_residual) <= tol_d;
    if (res.failing_vertex) j["worst_vertex"] = res.failing_vertex->to_string();
    j["truncation_caveat"] = res.truncation_caveat;
    emit(cfg.report_path.empty() ? cfg.out : cfg.report_path, j);
    return j["pass"].get<bool>() ? 0 : 2;
  }

  if (cfg.command == "check-hyponormal") {
    const auto model = model_from_json<Real>(load_json(cfg.inputs.at(0)));
    const auto rep = hyponormality(model, tol);
    emit(cfg.report_path.empty() ? cfg.out : cfg.report_path, hyponormality_to_json(rep));
    return 0;
  }

  if (cfg.command == "h-table") {
    const auto model = model_from_json<Real>(load_json(cfg.inputs.at(0)));
    RnTable<Real> table(model, cfg.max_n);
    const auto vertices = model.shape.vertices();

    // hyponormality slack per vertex, reported alongside the table
    std::map<VertexId, Real> slack;
    try {
      slack = hyponormality(model, tol).per_vertex_slack;
    } catch (const Error&) {
    }

    auto fmt = [](double x) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      return std::string(buf);
    };

    if (cfg.csv) {
      std::ostringstream os;
      os << "n";
      for (const auto& v : vertices) os << "," << v.to_string() << "," << v.to_string() << "_err";
      os << "\n";
      for (long n = 0; n <= cfg.max_n; ++n) {
        os << n;
        for (const auto& v : vertices) {
          try {
            const auto h = table.value(v, n);
            os << "," << fmt(to_double(h.value)) << "," << fmt(to_double(h.error));
          } catch (const Error&) {
            os << ",truncated,truncated";
          }
        }
        os << "\n";
      }
      os << "slack";
      for (const auto& v : vertices) {
        auto it = slack.find(v);
        if (it == slack.end())
          os << ",truncated,";
        else
          os << "," << fmt(to_double(it->second)) << ",";
      }
      os << "\n";
      if (cfg.out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream f(cfg.out);
        if (!f) throw Error("cannot write " + cfg.out);
        f << os.str();
      }
    } else {
      Json j;
      j["rows"] = Json::array();
      for (long n = 0; n <= cfg.max_n; ++n) {
        Json row;
        row["n"] = n;
        row["h"] = Json::array();
        for (const auto& v : vertices) {
          try {
            const auto h = table.value(v, n);
            row["h"].push_back({v.to_string(), to_double(h.value), to_double(h.error)});
          } catch (const Error&) {
            row["h"].push_back({v.to_string(), nullptr, nullptr});
          }
        }
        j["rows"].push_back(std::move(row));
      }
      j["slack"] = Json::array();
      for (const auto& v : vertices) {
        auto it = slack.find(v);
        if (it != slack.end()) j["slack"].push_back({v.to_string(), to_double(it->second)});
      }
      emit(cfg.out, j);
    }
    return 0;
  }

  if (cfg.command == "build-subnormal") {
    const auto conf = load_json(cfg.inputs.at(0));
    std::vector<AtomicMeasure<Real>> seeds;
    std::vector<Real> weights;
    for (const auto& s : conf.at("seeds")) seeds.push_back(measure_from_json<Real>(s));
    for (const auto& w : conf.at("weights")) weights.push_back(Real(w.get<double>()));
    std::optional<Real> mu0;
    if (conf.contains("mu_x0")) mu0 = Real(conf.at("mu_x0").get<double>());
    const long depth = conf.value("branch_depth", 24L);
    const bool eta_inf = conf.contains("eta") && conf.at("eta").is_string();
    const auto build =
        build_subnormal(seeds, conf.value("kappa", 0L), mu0, weights, depth, eta_inf);
    if (!cfg.out.empty()) save_json(cfg.out, model_to_json(build.model));
    Json j;
    j["Theta"] = to_double(build.report.Theta);
    j["vartheta"] = to_double(build.report.vartheta);
    j["cc_residual"] = to_double(build.report.cc_residual);
    j["family"] = family_to_json(build.family);
    emit(cfg.report_path, j);
    return to_double(build.report.cc_residual) <= tol_d ? 0 : 2;
  }

  if (cfg.command == "build-exotic") {
    ExoticSource<Real> src;
    if (cfg.source.rfind("asc:", 0) == 0) {
      src.kind = ExoticSourceKind::ASC;
      const auto rest = cfg.source.substr(4);
      const auto comma = rest.find(',');
      if (comma == std::string::npos) throw Error("expected --source asc:a,q");
      src.a = Real(std::stod(rest.substr(0, comma)));
      src.q = Real(std::stod(rest.substr(comma + 1)));
    } else if (cfg.source == "quartic" || cfg.source.empty()) {
      src.kind = ExoticSourceKind::Quartic;
    } else {
      throw Error("unknown source '" + cfg.source + "'");
    }
    const bool eta_inf = cfg.eta == "inf";
    const std::int64_t eta = eta_inf ? 0 : std::stoll(cfg.eta);
    const long n = cfg.atoms > 0 ? cfg.atoms : (src.kind == ExoticSourceKind::ASC ? 40 : 12);
    const long depth = cfg.branch_depth > 0 ? cfg.branch_depth : 12;
    const auto rep =
        exotic_pipeline<Real>(eta, eta_inf, src, n, depth, 4, Real(1), cfg.kappa);
    if (!cfg.out.empty()) save_json(cfg.out, model_to_json(rep.build.model));

    Json j;
    j["source"] = rep.notes;
    j["homothety_parameter"] = to_double(rep.homothety_parameter);
    j["scale_r"] = to_double(rep.scale_r);
    j["beta_min_atom_mass"] = to_double(rep.beta_min_atom_mass);
    j["xi"] = to_double(rep.build.diagnostics.xi);
    j["seed_pair"] = {
        {"inf_supports", rep.build.diagnostics.seed_checks.inf_supports_ok},
        {"mass_identity", rep.build.diagnostics.seed_checks.mass_identity_ok},
        {"kappa_power", rep.build.diagnostics.seed_checks.power_condition_ok},
        {"moment_agreement_depth", rep.build.diagnostics.seed_checks.moment_agreement_depth},
        {"provenance", rep.build.diagnostics.seed_checks.provenance},
    };
    j["c"] = Json::array();
    for (const auto& c : rep.build.diagnostics.c) j["c"].push_back(to_double(c));
    j["lambda"] = to_double(rep.build.diagnostics.lambda);
    j["loop_moment_agreement_depth"] = rep.build.diagnostics.loop_moment_agreement_depth;
    j["hyponormality"] = hyponormality_to_json(rep.hyponormality);
    j["hankel_evidence"] = Json::array();
    for (const auto& [v, verdict] : rep.hankel_evidence)
      j["hankel_evidence"].push_back({v.to_string(), to_string(verdict)});
    j["id_violated"] = rep.id_violated;
    j["id_defect"] = to_double(rep.id_defect);
    emit(cfg.report_path, j);
    return 0;
  }

  if (cfg.command == "lambda") {
    const auto tau = measure_from_json<Real>(load_json(cfg.inputs.at(0)));
    const auto part = partition_from_json(load_json(cfg.inputs.at(1)));
    const auto res = lambda_functional(tau, part);
    Json j;
    j["value"] = to_double(res.value);
    j["inf_bound"] = to_double(res.inf_bound);
    j["sup_bound"] = to_double(res.sup_bound);
    emit(cfg.out, j);
    return 0;
  }

  throw Error("unknown command '" + cfg.command + "'");
}

}  // namespace scenario_detail

// Exit codes: 0 success, 2 quantitative verification failure, 1 usage or
// input error (reported as machine-readable JSON on stderr).
inline int run_scenario(const ScenarioConfig& cfg) {
  try {
    return cfg.high_precision ? scenario_detail::run_typed<HighPrec>(cfg)
                              : scenario_detail::run_typed<double>(cfg);
  } catch (const std::exception& e) {
    Json err;
    err["error"] = e.what();
    err["command"] = cfg.command;
    std::cerr << err.dump() << "\n";
    return 1;
  }
}

}  // namespace onecircuit

#endif
