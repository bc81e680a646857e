#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "modkit/io.hpp"

using namespace modkit;

namespace {

struct Run {
  int code = 0;
  Json doc;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run(args, out, err);
  r.err = err.str();
  if (!out.str().empty() && out.str().front() == '{') r.doc = Json::parse(out.str());
  return r;
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

bool all_checks_pass(const Json& doc) {
  for (const auto& c : doc.at("checks")) {
    if (c.at("status") != "pass") return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval on a linear file") {
  const auto path = temp("modkit_cli_linear.json");
  save_json(path.string(), Json{{"n", 3}, {"kind", "linear"}, {"values", {0.5, 1.0, 2.0, 4.0}}});
  const Run r = run({"eval", "--fn", path.string(), "--set", "0x3"});
  CHECK(r.code == 0);
  CHECK(r.doc["command"] == "eval");
  CHECK(r.doc["results"]["value"].get<double>() == doctest::Approx(3.5));
  CHECK(r.doc["timing"].contains("wall_seconds"));
  std::filesystem::remove(path);
}

TEST_CASE("eps on builtins") {
  const Run r = run({"eps", "--fn", "pawlik:3", "--variant", "both"});
  CHECK(r.code == 0);
  CHECK(r.doc["results"]["weak"]["eps"] == 1.0);
  CHECK(r.doc["results"]["strong"]["eps"] == 2.0);
}

TEST_CASE("fit reports a tight certificate") {
  const Run r = run({"fit", "--fn", "symm:10:1"});
  CHECK(r.code == 0);
  CHECK(r.doc["results"]["delta"].get<double>() == doctest::Approx(0.45));
  CHECK(all_checks_pass(r.doc));
}

TEST_CASE("bounds preset") {
  const Run r = run({"bounds", "--preset", "paper"});
  CHECK(r.code == 0);
  const auto& res = r.doc["results"];
  CHECK(res["kr_a"].get<double>() == doctest::Approx(44.5));
  CHECK(res["kr_b"].get<double>() == doctest::Approx(38.8));
  CHECK(res["kfirst_a"].get<double>() == doctest::Approx(32.5));
  CHECK(res["kfirst_b"].get<double>() == doctest::Approx(26.8));
  CHECK(std::abs(res["kw_min"].get<double>() - 23.8103) <= 1e-3);
  CHECK(std::abs(res["kprime"].get<double>() - 14.6364) <= 1e-3);
  CHECK(std::abs(res["ks_v1"].get<double>() - 13.2461) <= 1e-3);
  CHECK(all_checks_pass(r.doc));
}

TEST_CASE("verify km20 exactly") {
  const Run r = run({"verify", "km20", "--level", "exact"});
  CHECK(r.code == 0);
  CHECK(all_checks_pass(r.doc));
  CHECK(r.doc["results"]["exact_eps"] == 2.0);
  CHECK(r.doc["results"]["ratio"].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("verify four") {
  const Run r = run({"verify", "four"});
  CHECK(r.code == 0);
  CHECK(all_checks_pass(r.doc));
}

TEST_CASE("learn writes the function and the profile") {
  const auto out = temp("modkit_cli_h.json");
  const auto csv = temp("modkit_cli_profile.csv");
  const Run r = run({"learn", "--fn", "noisy:32:0.1:4", "--delta", "0.1", "--out", out.string(), "--profile",
                     csv.string(), "--profile-samples", "200"});
  CHECK(r.code == 0);
  CHECK(all_checks_pass(r.doc));
  CHECK(r.doc["results"]["distinct_queries"].get<int>() <= 65);
  CHECK(load_function(out.string()).n() == 32);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "size,max_err,bound");
  std::filesystem::remove(out);
  std::filesystem::remove(csv);
}

TEST_CASE("construct and reload") {
  const auto path = temp("modkit_cli_pawlik.json");
  CHECK(run({"construct", "pawlik:3", "--out", path.string()}).code == 0);
  const Run r = run({"eps", "--fn", path.string(), "--variant", "strong"});
  CHECK(r.doc["results"]["strong"]["eps"] == 2.0);

  // Large constructions are written as descriptors that resolve back to the builtin.
  CHECK(run({"construct", "km70", "--out", path.string()}).code == 0);
  CHECK(load_json(path.string())["kind"] == "descriptor");
  const Run e = run({"eval", "--fn", path.string(), "--set", "{}"});
  CHECK(e.code == 0);
  std::filesystem::remove(path);
}

TEST_CASE("report flag writes to a file") {
  const auto path = temp("modkit_cli_report.json");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cli::run({"--report", path.string(), "eval", "--fn", "four", "--set", "1,2"}, out, err) == 0);
  CHECK(out.str().empty());
  CHECK(load_json(path.string())["results"]["value"] == 1.0);
  std::filesystem::remove(path);
}

TEST_CASE("expander commands") {
  CHECK(run({"expander", "rate", "--alpha", "0.25", "--r", "5", "--theta", "0.5"}).code == 0);
  const Run s = run({"expander", "recombine", "--seed", "1"});
  CHECK(s.code == 0);
  CHECK(all_checks_pass(s.doc));
}

TEST_CASE("errors map to exit codes") {
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"eval", "--fn", "/nonexistent.json", "--set", "1"}).code == 2);
  CHECK(run({"eval", "--fn", "pawlik:99", "--set", "1"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const auto path = temp("modkit_cli_bad.json");
  std::ofstream(path) << "{ not json";
  const Run bad = run({"eval", "--fn", path.string(), "--set", "1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("error") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("a failed verification exits 1 with a witness") {
  // An LP band far below the noise makes the profile check fail.
  const auto csv = temp("modkit_cli_fail.csv");
  const Run r = run({"learn", "--fn", "noisy:16:0.5:1", "--delta", "0.001", "--profile", csv.string(),
                     "--profile-samples", "100"});
  CHECK(r.code == 1);
  std::filesystem::remove(csv);
}

}  // TEST_SUITE
