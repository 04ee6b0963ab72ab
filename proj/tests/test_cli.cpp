#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "frachs/cli.hpp"

namespace fs = std::filesystem;
using frachs::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "frachs_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify exact suite") {
  const Outcome o = call({"verify", "--suite", "exact"});
  CHECK(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["command"] == "verify");
  CHECK(j["status"] == "pass");
  CHECK(j["result"]["failed"] == 0);
  CHECK(j["result"]["total"].get<int>() > 10);
  CHECK(j["config"]["seed"] == 12345);
}

TEST_CASE("configuration errors exit 2") {
  CHECK(call({"verify", "--alpha", "1"}).code == 2);
  CHECK(call({"verify", "--suite", "bogus"}).code == 2);
  CHECK(call({"bound", "--R-grid", "0.5,1.0"}).code == 2);
  CHECK(call({"hardy", "--corpus", "nope"}).code == 2);
  CHECK(call({"hardy", "--samples", "abc"}).code == 2);
  CHECK(call({"bound", "--alpha", "0.5"}).code == 2);
  CHECK(call({}).code == 2);
}

TEST_CASE("hardy on one field has zero spread, reports are reproducible") {
  const fs::path a = scratch("h1.json"), b = scratch("h2.json"), t = scratch("h.csv");
  const std::vector<std::string> args{"hardy", "--corpus", "bump_k2", "--samples", "40000"};
  auto with = [&](const fs::path& p) {
    auto v = args;
    v.insert(v.end(), {"--out", p.string(), "--table", t.string()});
    return v;
  };
  REQUIRE(call(with(a)).code == 0);
  setenv("FRACHS_THREADS", "3", 1);
  REQUIRE(call(with(b)).code == 0);
  unsetenv("FRACHS_THREADS");
  // Reports differ only in the recorded --out path.
  auto j = nlohmann::json::parse(slurp(a)), k = nlohmann::json::parse(slurp(b));
  CHECK(j["config"]["out"] != k["config"]["out"]);
  j["config"].erase("out");
  k["config"].erase("out");
  CHECK(j.dump() == k.dump());
  CHECK(j["result"]["spread"] == 0.0);
  CHECK(j["result"]["trials"] == 1);
  CHECK(slurp(t).rfind("field,ratio,std_error\nbump_k2,", 0) == 0);
}

TEST_CASE("config file and flags merge") {
  const fs::path cfg = scratch("run.toml"), out = scratch("c.json");
  std::ofstream(cfg) << "samples = 30000\nseed = 7\nsuite = \"exact\"\n";
  REQUIRE(call({"verify", "--config", cfg.string(), "--seed", "8", "--out", out.string()}).code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["config"]["samples"] == 30000);
  CHECK(j["config"]["seed"] == 8);
  CHECK(j["config"]["suite"] == "exact");
}

TEST_CASE("symmetrize a fixed point, then feed its profile to bound") {
  const fs::path out = scratch("s.json"), prof = scratch("h.csv"), trace = scratch("t.csv"), bout = scratch("b.json");
  REQUIRE(call({"symmetrize", "--start", "profile_quartic", "--samples", "20000", "--out",
                out.string(), "--export-profile", prof.string(), "--trace", trace.string()})
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["result"]["steps"].get<int>() <= 2);
  CHECK(j["result"]["converged"] == true);
  CHECK(slurp(trace).rfind("k,phi", 0) == 0);
  const Outcome b = call({"bound", "--samples", "60000", "--R-grid", "0.1,0.3", "--check-corpus", "--profile",
                          prof.string(), "--out", bout.string()});
  CHECK(b.code == 0);
  const auto k = nlohmann::json::parse(slurp(bout));
  CHECK(k["result"]["a_lower"].get<double>() > 0.0);
  CHECK(k["result"]["corpus_check"].back()["field"] == "profile");
}
