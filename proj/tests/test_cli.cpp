#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "kfn/cli/config.hpp"
#include "kfn/cli/run.hpp"
#include "kfn/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = kfn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const char* env = std::getenv("KFN_TEST_TMP");
  fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "kfn_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

const char* kWeighted = R"({"kind": "weighted_l1", "weights": [1, 2, 4, 8, 16, 32, 64, 128], "p": 1})";

}  // namespace

TEST_CASE("strictbound prints the closed form") {
  const Result r = run({"strictbound", "--theta", "0.5", "--q", "1", "--N0", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("1.45710678118654", 0) == 0);
}

TEST_CASE("kcurve writes deterministic CSV") {
  const fs::path couple = write("weighted.json", kWeighted);
  const fs::path a = scratch() / "curve_a.csv";
  const fs::path b = scratch() / "curve_b.csv";
  for (const fs::path& p : {a, b}) {
    fs::remove(p);
    const Result r = run({"kcurve", "--couple", couple.string(), "--x", "basis:5", "--tmin", "1e-6",
                          "--tmax", "1", "--points", "60", "--out", p.string()});
    REQUIRE(r.code == 0);
  }
  const std::string csv = slurp(a);
  CHECK(csv == slurp(b));
  CHECK(csv.rfind("t,K,err\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
  CHECK_FALSE(fs::exists(a.string() + ".partial"));
}

TEST_CASE("validation errors exit 2 and write nothing") {
  const fs::path couple = write("weighted2.json", kWeighted);
  const fs::path out = scratch() / "never.csv";
  fs::remove(out);
  const std::vector<std::vector<std::string>> bad{
      {"kcurve", "--couple", couple.string(), "--x", "basis:5", "--tmin", "-1", "--out", out.string()},
      {"kcurve", "--couple", couple.string(), "--x", "basis:9", "--out", out.string()},
      {"kcurve", "--couple-json", "{\"kind\": \"lq_lp\", \"q\": 2, \"p\": 0.5}", "--x", "ones:2",
       "--out", out.string()},
      {"kcurve", "--couple-json", "{\"kind\": \"clip\", \"extra\": 1}", "--x", "ones:2", "--out",
       out.string()},
      {"kcurve", "--couple-json", "{not json", "--x", "ones:2", "--out", out.string()},
      {"frobnicate"},
      {"reiter-check", "--out", out.string()},
      {"certify", "--family", "nope", "--out", out.string()},
      {"decompose", "--couple", couple.string(), "--x", "ones:8", "--t0", "0.1", "--rho", "1.5",
       "--out", out.string()},
      {"interpnorm", "--couple", couple.string(), "--x", "ones:8", "--theta", "1", "--out",
       out.string()},
  };
  for (const auto& args : bad) {
    const Result r = run(args);
    CAPTURE(args.front());
    CAPTURE(r.err);
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(out));
  }
}

TEST_CASE("a violated declared embedding constant is a validation error") {
  const Result r = run({"kcurve", "--couple-json",
                        R"({"kind": "clip", "embedding_constant": 2})", "--x", "ones:4"});
  CHECK(r.code == 2);
  CHECK(r.err.find("embedding_constant") != std::string::npos);
}

TEST_CASE("check failures exit 1 with JSON diagnostics and no output") {
  const fs::path out = scratch() / "trace_fail.json";
  fs::remove(out);
  const Result r = run({"decompose", "--couple-json", R"({"kind": "weighted_l1", "weights": [1, 1]})",
                        "--x", "basis:0", "--t0", "1", "--rho", "0.9", "--out", out.string()});
  CHECK(r.code == 1);
  CHECK_FALSE(fs::exists(out));
  const json diag = json::parse(r.err);
  CHECK(diag["error"] == "check_failure");
  CHECK(diag["detail"].contains("steps"));
}

TEST_CASE("certify families") {
  SUBCASE("lqlp") {
    const Result r = run({"certify", "--family", "lqlp", "--p", "1", "--N", "8"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["c"].get<double>() == doctest::Approx(0.5));
    CHECK(j["slow_decay"] == true);
    CHECK(j["entries"].size() == 8);
  }
  SUBCASE("c1") {
    const Result r = run({"certify", "--family", "c1", "--N", "10", "--nodes", "1001"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["slow_decay"] == true);
  }
  SUBCASE("clip-constant is flagged") {
    const Result r = run({"certify", "--family", "clip-constant", "--N", "5"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["slow_decay"] == false);
  }
}

TEST_CASE("decompose, interpnorm, phi, reiter-check") {
  const Result d = run({"decompose", "--couple-json", kWeighted, "--x", "values:1,-1,0.5,0,0,2,0,1",
                        "--t0", "0.00390625", "--rho", "0.6", "--m", "20"});
  REQUIRE(d.code == 0);
  CHECK(json::parse(d.out).contains("cauchy"));

  const Result i = run({"interpnorm", "--couple-json", kWeighted, "--x", "basis:3", "--theta",
                        "0.5", "--q", "1"});
  REQUIRE(i.code == 0);
  CHECK(json::parse(i.out)["value"].get<double>() > 0.0);

  const Result p = run({"phi", "--dim", "20", "--points", "10", "--samples", "20", "--seed", "3"});
  REQUIRE(p.code == 0);
  CHECK(p.out.rfind("t,phi,linear_bound,saturation\n", 0) == 0);
  CHECK(run({"phi", "--samples", "20"}).code == 2);

  const Result a = run({"reiter-check", "--seed", "5", "--samples", "20", "--dim", "12"});
  const Result b = run({"reiter-check", "--seed", "5", "--samples", "20", "--dim", "12"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["label"] == "empirical");
  CHECK(j["doubled"]["samples"] == 40);
}

TEST_CASE("experiment configs run like the equivalent flags") {
  const fs::path from_flags = scratch() / "cfg_flags.csv";
  const fs::path from_config = scratch() / "cfg_config.csv";
  fs::remove(from_flags);
  fs::remove(from_config);
  REQUIRE(run({"kcurve", "--couple-json", kWeighted, "--x", "basis:2", "--points", "7", "--out",
               from_flags.string()})
              .code == 0);
  json cfg;
  cfg["command"] = "kcurve";
  cfg["couple"] = json::parse(kWeighted);
  cfg["params"] = {{"x", "basis:2"}, {"points", 7}};
  cfg["output_path"] = from_config.string();
  const fs::path cfg_path = write("exp.json", cfg.dump());
  const Result r = run({"--config", cfg_path.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(from_flags) == slurp(from_config));

  json bad = cfg;
  bad["params"]["points"] = -3;
  CHECK(run({"--config", write("bad.json", bad.dump()).string()}).code == 2);
  json unknown = cfg;
  unknown["colour"] = "blue";
  CHECK(run({"--config", write("unknown.json", unknown.dump()).string()}).code == 2);
}

TEST_CASE("couple parsing reports the key path") {
  try {
    kfn::cli::parse_couple_config(R"({"kind": "weighted_l1", "weights": [1, "x"]})");
    FAIL("expected a DomainError");
  } catch (const kfn::DomainError& e) {
    CHECK(std::string(e.what()).find("$.weights[1]") != std::string::npos);
  }
  const kfn::CoupleSpec c = kfn::cli::parse_couple_config(R"({"kind": "lq_lp", "q": 2, "p": 1})");
  CHECK(c.solver() == kfn::SolverKind::numeric_lq_lp);
  CHECK(kfn::cli::parse_couple_config(kfn::cli::couple_to_json(c)) == c);
}
