#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ses/cli.hpp"

namespace {

const std::string data = SES_TEST_DATA;

struct Run {
  int code;
  std::string out, err;
};

Run run_ses(std::vector<std::string> args) {
  args.insert(args.begin(), "ses");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ses::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("worked examples") {
  const Run inv = run_ses({"eq", "invert", "--spectrum", data + "/twolevel.json", "--energy", "0.75"});
  CHECK(inv.code == 0);
  CHECK(lines(inv.out) ==
        std::vector<std::string>{"# seed=0", "b,T,E,S", "-1.09861228867,-0.910239226627,0.75,0.562335144619"});

  const Run part = run_ses({"partition", "--n", "2", "--lambda", "2", "--t", "1", "--model", "closed"});
  CHECK(lines(part.out).at(1) == "lambda,S_irr,W_min,subdivision_potential");
  CHECK(lines(part.out).at(2).rfind("2,1.38629436112,1.7622031559,", 0) == 0);

  const Run bounds = run_ses({"interact", "bounds", "--ta", "400", "--tb", "300", "--de", "12"});
  CHECK(lines(bounds.out).at(2) == "0.03,0.04,true");
  const Run reverse = run_ses({"interact", "bounds", "--ta", "300", "--tb", "400", "--de", "12"});
  CHECK(lines(reverse.out).at(2) == "0.04,0.03,false");
  const Run ds = run_ses({"interact", "bounds", "--ta", "400", "--tb", "300", "--de", "12", "--ds", "0.05"});
  CHECK(lines(ds.out).at(2) == "0.03,0.04,false");
}

TEST_CASE("exit codes and diagnostics") {
  const Run domain = run_ses({"eq", "invert", "--spectrum", data + "/twolevel.json", "--energy", "2"});
  CHECK(domain.code == 1);
  CHECK(domain.out.empty());
  CHECK(domain.err.find("EnergyOutOfRange") != std::string::npos);
  CHECK(lines(domain.err).size() == 1);

  CHECK(run_ses({"eq", "invert", "--spectrum", data + "/twolevel.json", "--bogus", "1"}).code == 2);
  CHECK(run_ses({}).code == 2);
  CHECK(run_ses({"frobnicate"}).code == 2);
  CHECK(run_ses({"eq", "table", "--spectrum", data + "/twolevel.json", "--b-grid", "1:2"}).code == 2);
  CHECK(run_ses({"eq", "invert", "--spectrum", data + "/missing.json", "--energy", "0.5"}).code == 1);
  const Run help = run_ses({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("partition") != std::string::npos);
}

TEST_CASE("state, availability and diagram") {
  const Run info = run_ses({"state", "info", data + "/state.json"});
  REQUIRE(info.code == 0);
  CHECK(lines(info.out).at(1) == "E,S,variance,D");
  CHECK(lines(info.out).at(2).rfind("0.75,0.562335144619,0.1875,", 0) == 0);

  const Run avail = run_ses({"avail", "--state", data + "/state.json"});
  CHECK(lines(avail.out).at(1) == "E,S,psi,ergotropy,omega,A_value");
  CHECK(lines(avail.out).at(2) == "0.75,0.562335144619,0.5,0.5,nan,nan");
  const Run with_res = run_ses({"avail", "--state", data + "/state.json", "--reservoir", "1", "--kind", "fixed_Vn"});
  const auto row = lines(with_res.out).at(2);
  CHECK(row.find("nan") == std::string::npos);
  CHECK(run_ses({"avail", "--state", data + "/state.json", "--reservoir", "1", "--kind", "variable_V"}).code == 1);

  const Run diag = run_ses({"diagram", "--spectrum", data + "/twolevel.json", "--points", "20", "--negative",
                        "--annotate", data + "/state.json", "--tr", "1"});
  REQUIRE(diag.code == 0);
  const auto l = lines(diag.out);
  CHECK(l.at(1) == "S,E,b,T");
  CHECK(l.back().rfind("# annotation ", 0) == 0);
  const auto ann = nlohmann::json::parse(l.back().substr(13));
  CHECK(ann["psi"].get<double>() == doctest::Approx(0.5));
  CHECK(ann.contains("omega"));
}

TEST_CASE("formats, config and output file") {
  const Run j = run_ses({"--format", "json", "interact", "bounds", "--ta", "400", "--tb", "300", "--de", "12"});
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["seed"] == 0);
  CHECK(doc["rows"][0]["admissible"] == true);
  CHECK(doc["rows"][0]["lower"].get<double>() == 0.03);

  const auto dir = std::filesystem::temp_directory_path() / "ses_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = (dir / "config.json").string();
  std::ofstream(cfg) << R"({"units": "reduced", "tolerances": {"energy_tol": 1e-10, "entropy_tol": 1e-10,
                          "fd_step": 1e-4}, "output": "json", "seed": 42})";
  const Run c = run_ses({"--config", cfg, "interact", "direction", "--ta", "2", "--tb", "1", "--de", "1"});
  CHECK(nlohmann::json::parse(c.out)["seed"] == 42);
  CHECK(nlohmann::json::parse(c.out)["rows"][0]["direction"] == "allowed");
  const Run over = run_ses({"--config", cfg, "--format", "csv", "--seed", "5", "interact", "direction", "--ta", "1",
                        "--tb", "2", "--de", "1"});
  CHECK(lines(over.out) == std::vector<std::string>{"# seed=5", "direction", "forbidden"});

  setenv("SES_CONFIG", cfg.c_str(), 1);
  CHECK(nlohmann::json::parse(run_ses({"interact", "direction", "--ta", "2", "--tb", "1", "--de", "1"}).out)["seed"] == 42);
  unsetenv("SES_CONFIG");

  std::ofstream(dir / "bad.json") << R"({"tolerances": {"fd_step": -1}})";
  CHECK(run_ses({"--config", (dir / "bad.json").string(), "interact", "direction", "--ta", "2", "--tb", "1", "--de", "1"})
            .code == 1);

  const auto out = (dir / "out.csv").string();
  const Run to_file = run_ses({"--out", out, "interact", "bounds", "--ta", "400", "--tb", "300", "--de", "12"});
  CHECK(to_file.out.empty());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "# seed=0\nlower,upper,admissible\n0.03,0.04,true\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("spectrum, eq, grand and cycle commands") {
  const auto dir = std::filesystem::temp_directory_path() / "ses_cli_spectra";
  std::filesystem::create_directories(dir);
  const auto osc = (dir / "osc.json").string();
  REQUIRE(run_ses({"--out", osc, "spectrum", "build", "--kind", "oscillator", "--hnu", "1", "--tmax", "1"}).code == 0);
  const Run info = run_ses({"spectrum", "info", "--spectrum", osc});
  CHECK(lines(info.out).at(2).rfind("oscillator,", 0) == 0);
  const Run table = run_ses({"eq", "table", "--spectrum", osc, "--b-grid", "1:4:4", "--log"});
  CHECK(lines(table.out).size() == 6);
  CHECK(lines(table.out).at(1) == "b,T,lnQ,E,S,variance,C");
  CHECK(run_ses({"eq", "table", "--spectrum", osc, "--b-grid", "-1:1:3"}).code == 1);

  const Run finite = run_ses({"spectrum", "build", "--kind", "finite", "--level", "0:1", "--level", "1:2"});
  const auto spec = nlohmann::json::parse(finite.out);
  CHECK(spec["levels"][1]["degeneracy"] == 2.0);
  const Run box = run_ses({"spectrum", "build", "--kind", "box", "--tmax", "1"});
  CHECK(nlohmann::json::parse(box.out)["levels"][0]["energy"].get<double>() == doctest::Approx(0.375));
  CHECK(run_ses({"spectrum", "build", "--kind", "box", "--max-q", "4", "--tmax", "1"}).err.find("TruncationTooCoarse") !=
        std::string::npos);

  const Run split = run_ses({"eq", "split", "--a", data + "/twolevel.json", "--b", data + "/twolevel.json", "--energy", "0.5"});
  CHECK(lines(split.out).at(2).rfind("0.25,0.25,", 0) == 0);
  const Run ent = run_ses({"eq", "entropy", "--spectrum", data + "/twolevel.json", "--entropy", "0.5", "--negative"});
  CHECK(ent.code == 0);

  const auto model = (dir / "model.json").string();
  std::ofstream(model) << R"({"volume": 1, "scaling": "none", "box": {"b_min": 0.1, "b_max": 10, "mu_max": 1},
                             "sectors": [{"levels": [[0, 1]]}]})";
  const Run grand = run_ses({"grand", "--model", model, "--b", "1", "--mu", "0"});
  CHECK(lines(grand.out).at(1) == "b,mu,lnQ,n,E,S,p,Eu");
  CHECK(lines(grand.out).at(2).rfind("1,0,0.69314718056,0.5,", 0) == 0);
  CHECK(run_ses({"grand", "--model", model, "--b", "1", "--amount", "0.5"}).code == 0);
  CHECK(run_ses({"grand", "--model", model, "--b", "1", "--mu", "5"}).code == 1);

  const Run cyc = run_ses({"interact", "cycle", "--records", data + "/cycle.csv"});
  CHECK(lines(cyc.out).at(2) == "0,satisfied");
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify is reproducible") {
  const Run a = run_ses({"verify", "--suite", "spectra", "--seed", "3"});
  const Run b = run_ses({"verify", "--suite", "spectra", "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).front() == "# seed=3");
  CHECK(lines(a.out).back() == "# passed=6 failed=0");
  CHECK(run_ses({"verify", "--suite", "nonsense"}).code == 1);
}
