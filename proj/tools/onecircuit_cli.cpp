// Command-line front end: every subcommand reads and writes the JSON
// schemas of the library (see README for examples).

#include "CLI11.hpp"

#include "onecircuit/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"composition operators over one-circuit graphs: measures, "
               "moment diagnostics and the exotic constructions"};
  app.require_subcommand(1);

  onecircuit::ScenarioConfig cfg;
  std::string precision = "high";

  app.add_option("--precision", precision, "scalar precision: double|high")
      ->check(CLI::IsMember({"double", "high"}));

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "verification tolerance");
    sub->add_option("--out", cfg.out, "output file (stdout if omitted)");
    sub->add_option("--report", cfg.report_path, "report file (stdout if omitted)");
    return sub;
  };

  auto* asc = add_common(app.add_subcommand("asc-measure", "q-series measure with atoms q^-n"));
  asc->add_option("--a", cfg.a)->required();
  asc->add_option("--q", cfg.q)->required();
  asc->add_option("--atoms", cfg.atoms);
  asc->add_option("--which", cfg.which, "beta|gamma")
      ->check(CLI::IsMember({"beta", "gamma"}))
      ->default_val("beta");

  auto* quart = add_common(app.add_subcommand("quartic", "quartic birth-and-death pair member"));
  quart->add_option("--atoms", cfg.atoms);
  quart->add_option("--which", cfg.which, "zeta|rho")
      ->check(CLI::IsMember({"zeta", "rho"}))
      ->default_val("zeta");

  auto* euler = add_common(app.add_subcommand("euler-threshold", "largest q with the product bound"));
  euler->add_option("--a", cfg.a)->required();
  euler->add_option("--grid-step", cfg.grid_step);

  auto* hank = add_common(app.add_subcommand("hankel", "Hankel positivity report for a sequence"));
  hank->add_option("sequence", cfg.inputs)->required()->expected(1);

  auto* carl = add_common(app.add_subcommand("carleman", "Carleman partial sums and growth class"));
  carl->add_option("sequence", cfg.inputs)->required()->expected(1);

  auto* trans = add_common(app.add_subcommand("transform", "homothety action on a sequence"));
  trans->add_option("sequence", cfg.inputs)->required()->expected(1);
  trans->add_option("--scale", cfg.scale);
  trans->add_option("--shift", cfg.shift);
  trans->add_option("--direction", cfg.direction)->check(CLI::IsMember({"forward", "inverse"}));

  auto* vcc = add_common(app.add_subcommand("verify-cc", "check a family against the balance"));
  vcc->add_option("files", cfg.inputs, "model.json family.json")->required()->expected(2);

  auto* hypo = add_common(app.add_subcommand("check-hyponormal", "per-vertex slack report"));
  hypo->add_option("model", cfg.inputs)->required()->expected(1);

  auto* htab = add_common(app.add_subcommand("h-table", "derivative table for a model"));
  htab->add_option("model", cfg.inputs)->required()->expected(1);
  htab->add_option("--max-n", cfg.max_n);
  htab->add_flag("--csv", cfg.csv);

  auto* bsub = add_common(app.add_subcommand("build-subnormal", "model+family from branch seeds"));
  bsub->add_option("config", cfg.inputs)->required()->expected(1);

  auto* bex = add_common(app.add_subcommand("build-exotic", "non-hyponormal construction"));
  bex->add_option("--eta", cfg.eta, "branch count or 'inf'");
  bex->add_option("--kappa", cfg.kappa)->check(CLI::NonNegativeNumber);
  bex->add_option("--source", cfg.source, "quartic | asc:a,q");
  bex->add_option("--atoms", cfg.atoms);
  bex->add_option("--branch-depth", cfg.branch_depth);

  auto* lam = add_common(app.add_subcommand("lambda", "partition functional and its bounds"));
  lam->add_option("--tau", cfg.inputs, "measure file")->required()->expected(1);
  std::string partition_file;
  lam->add_option("--partition", partition_file, "partition file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1; --help is success
  }

  cfg.high_precision = (precision == "high");
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command == "lambda") cfg.inputs.push_back(partition_file);

  return onecircuit::run_scenario(cfg);
}
