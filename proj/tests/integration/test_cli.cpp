#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "onecircuit/comp_op.hpp"
#include "onecircuit/json_io.hpp"

using namespace onecircuit;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = ONECIRCUIT_TEST_TMP;

int run(const std::string& args) {
  const std::string cmd = std::string(ONECIRCUIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TmpDir {
  TmpDir() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
};

WeightedGraphModel<double> bounded_model() {
  MomentSequence<double> g;
  for (long n = 0; n <= 16; ++n) g.values.push_back(0.5 * (pow_int(0.5, n) + pow_int(2.0, n)));
  return build_from_target_h0(g, 0, 1.0, 14);
}

}  // namespace

TEST_CASE("exotic build pipeline through the binary") {
  TmpDir tmp;
  const auto model = kTmp / "model.json";
  const auto report = kTmp / "report.json";
  REQUIRE(run("build-exotic --eta 2 --source quartic --atoms 12 --out " + model.string() +
              " --report " + report.string()) == 0);
  const auto j = Json::parse(slurp(report));
  CHECK(j.at("hyponormality").at("verdict").get<std::string>() == "NotHyponormal");
  CHECK(j.at("id_violated").get<bool>());
  CHECK(j.at("xi").get<double>() < 0.0);
  for (const auto& entry : j.at("hankel_evidence"))
    CHECK(entry.at(1).get<std::string>() == "StieltjesConsistent");

  // the emitted model is readable and internally consistent
  const auto m = model_from_json<double>(load_json(model.string()));
  CHECK(m.shape.eta == 2);
}

TEST_CASE("verify-cc distinguishes clean and perturbed families") {
  TmpDir tmp;
  const auto build = build_subnormal<double>(
      {AtomicMeasure<double>({{1.5, 0.5}, {3.0, 0.5}})}, 0, std::nullopt, {1.0}, 10);
  const auto model = kTmp / "model.json";
  const auto family = kTmp / "family.json";
  const auto perturbed = kTmp / "family_bad.json";
  save_json(model.string(), model_to_json(build.model));
  save_json(family.string(), family_to_json(build.family));

  auto fam = family_to_json(build.family);
  fam["members"][1][1]["atoms"][0][1] = fam["members"][1][1]["atoms"][0][1].get<double>() * 1.01;
  save_json(perturbed.string(), fam);

  CHECK(run("verify-cc " + model.string() + " " + family.string() + " --tol 1e-9") == 0);
  CHECK(run("verify-cc " + model.string() + " " + perturbed.string() + " --tol 1e-9") == 2);
}

TEST_CASE("h-table emits the target sequence in the x0 column") {
  TmpDir tmp;
  const auto model = kTmp / "model.json";
  const auto csv = kTmp / "table.csv";
  save_json(model.string(), model_to_json(bounded_model()));
  REQUIRE(run("h-table " + model.string() + " --max-n 10 --csv --out " + csv.string()) == 0);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("n,x0,x0_err", 0) == 0);
  std::string line;
  long n = 0;
  bool saw_slack = false;
  while (std::getline(in, line)) {
    if (line.rfind("slack", 0) == 0) {
      saw_slack = true;
      break;
    }
    const auto first_comma = line.find(',');
    const auto second_comma = line.find(',', first_comma + 1);
    const double x0 = std::stod(line.substr(first_comma + 1, second_comma - first_comma - 1));
    const double expect = 0.5 * (pow_int(0.5, n) + pow_int(2.0, n));
    CHECK(x0 == doctest::Approx(expect).epsilon(1e-12));
    ++n;
  }
  CHECK(n == 11);  // rows 0..10, row 0 is all ones
  CHECK(saw_slack);

  // determinism: byte-identical on a rerun
  const auto csv2 = kTmp / "table2.csv";
  REQUIRE(run("h-table " + model.string() + " --max-n 10 --csv --out " + csv2.string()) == 0);
  CHECK(slurp(csv) == slurp(csv2));
}

TEST_CASE("measure emission round trips and repeats byte for byte") {
  TmpDir tmp;
  const auto out1 = kTmp / "m1.json";
  const auto out2 = kTmp / "m2.json";
  REQUIRE(run("asc-measure --a 0.5 --q 0.25 --atoms 20 --out " + out1.string()) == 0);
  REQUIRE(run("asc-measure --a 0.5 --q 0.25 --atoms 20 --out " + out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));

  const auto m = measure_from_json<double>(load_json(out1.string()));
  CHECK(m.size() == 20);
  CHECK(m.inf_support() == 1.0);
  const auto again = kTmp / "m3.json";
  save_json(again.string(), measure_to_json(m));
  CHECK(Json::parse(slurp(out1)) == Json::parse(slurp(again)));
}

TEST_CASE("lambda and euler-threshold subcommands") {
  TmpDir tmp;
  const auto tau = kTmp / "tau.json";
  const auto part = kTmp / "part.json";
  AtomicMeasure<double> t({{2.0, 1.0}, {3.0, 0.5}, {5.0, 0.25}});
  save_json(tau.string(), measure_to_json(t));
  save_json(part.string(), Json{{"blocks", {{0}, {1, 2}}}, {"tail_block", 1}});
  const auto out = kTmp / "lambda.json";
  REQUIRE(run("lambda --tau " + tau.string() + " --partition " + part.string() + " --out " +
              out.string()) == 0);
  const auto j = Json::parse(slurp(out));
  CHECK(j.at("inf_bound").get<double>() <= j.at("value").get<double>() + 1e-12);
  CHECK(j.at("value").get<double>() <= j.at("sup_bound").get<double>() + 1e-12);

  const auto eout = kTmp / "euler.json";
  REQUIRE(run("euler-threshold --a 2 --out " + eout.string()) == 0);
  CHECK(Json::parse(slurp(eout)).at("q0").get<double>() > 0.0);
}

TEST_CASE("sequence diagnostics through the binary") {
  TmpDir tmp;
  const auto seq = kTmp / "seq.json";
  Json j;
  j["values"] = Json::array();
  for (long n = 0; n <= 8; ++n) j["values"].push_back(0.5 * (pow_int(0.5, n) + pow_int(2.0, n)));
  save_json(seq.string(), j);

  const auto hout = kTmp / "hankel.json";
  REQUIRE(run("hankel " + seq.string() + " --out " + hout.string()) == 0);
  CHECK(Json::parse(slurp(hout)).at("verdict").get<std::string>() == "StieltjesConsistent");

  const auto cout_ = kTmp / "carleman.json";
  REQUIRE(run("carleman " + seq.string() + " --out " + cout_.string()) == 0);
  CHECK(Json::parse(slurp(cout_)).contains("partial_sums"));

  const auto tout = kTmp / "transformed.json";
  REQUIRE(run("transform " + seq.string() + " --scale 2 --shift 1 --out " + tout.string()) == 0);
  const auto fwd = Json::parse(slurp(tout));
  const auto back = kTmp / "back.json";
  REQUIRE(run("transform " + tout.string() +
              " --scale 2 --shift 1 --direction inverse --out " + back.string()) == 0);
  const auto values = Json::parse(slurp(back)).at("values");
  for (long n = 0; n <= 8; ++n)
    CHECK(values[n].get<double>() ==
          doctest::Approx(j["values"][n].get<double>()).epsilon(1e-9));
}

TEST_CASE("builder and slack table through the binary") {
  TmpDir tmp;
  const auto cfgfile = kTmp / "build.json";
  Json conf;
  conf["kappa"] = 0;
  conf["branch_depth"] = 10;
  conf["seeds"] = Json::array();
  conf["seeds"].push_back(measure_to_json(AtomicMeasure<double>({{2.0, 1.0}})));
  conf["weights"] = {1.0};
  conf["mu_x0"] = 2.0;
  save_json(cfgfile.string(), conf);

  const auto model = kTmp / "model.json";
  const auto report = kTmp / "report.json";
  REQUIRE(run("build-subnormal " + cfgfile.string() + " --out " + model.string() + " --report " +
              report.string()) == 0);
  const auto rep = Json::parse(slurp(report));
  CHECK(rep.at("Theta").get<double>() == doctest::Approx(0.5));
  CHECK(rep.at("cc_residual").get<double>() <= 1e-10);

  const auto hypo = kTmp / "hypo.json";
  REQUIRE(run("check-hyponormal " + model.string() + " --report " + hypo.string()) == 0);
  CHECK(Json::parse(slurp(hypo)).at("verdict").get<std::string>() == "Hyponormal");

  // the exotic model's table carries a negative slack entry at x0
  const auto exmodel = kTmp / "exotic.json";
  REQUIRE(run("build-exotic --eta 2 --source quartic --atoms 12 --out " + exmodel.string() +
              " --report /dev/null") == 0);
  const auto csv = kTmp / "extable.csv";
  REQUIRE(run("h-table " + exmodel.string() + " --max-n 4 --csv --out " + csv.string()) == 0);
  std::istringstream lines(slurp(csv));
  std::string line, slack_line;
  while (std::getline(lines, line))
    if (line.rfind("slack", 0) == 0) slack_line = line;
  REQUIRE_FALSE(slack_line.empty());
  const auto comma = slack_line.find(',');
  const double slack_x0 = std::stod(slack_line.substr(comma + 1));
  CHECK(slack_x0 < 0.0);
}

TEST_CASE("quartic emission and the kappa pipeline variant") {
  TmpDir tmp;
  const auto zeta = kTmp / "zeta.json";
  REQUIRE(run("quartic --atoms 8 --which zeta --out " + zeta.string()) == 0);
  const auto m = measure_from_json<double>(load_json(zeta.string()));
  CHECK(m.atoms().front().location == 0.0);
  CHECK(m.atoms().front().mass == doctest::Approx(0.9138931620889273).epsilon(1e-12));

  const auto report = kTmp / "k1.json";
  REQUIRE(run("build-exotic --eta 2 --kappa 1 --source quartic --atoms 12 --report " +
              report.string()) == 0);
  const auto j = Json::parse(slurp(report));
  CHECK(j.at("id_violated").get<bool>());
  CHECK(j.at("xi").get<double>() < 0.0);
}

TEST_CASE("usage errors exit with code 1") {
  TmpDir tmp;
  CHECK(run("hankel /nonexistent.json") == 1);
  CHECK(run("no-such-command") == 1);
  CHECK(run("asc-measure --a 0.5") == 1);  // missing --q
}
