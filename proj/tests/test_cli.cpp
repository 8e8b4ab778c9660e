#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "corpus.hpp"
#include "logconnect/cli.hpp"
#include "support.hpp"

using namespace logconnect;
using io::Json;

namespace {

struct Result {
  int code;
  Json verdict;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  Json v;
  if (!out.str().empty()) v = Json::parse(out.str());
  return {code, v};
}

std::string fixture(const std::string& name) { return corpus::dir() + "/" + name; }

ComplexMatrix matrix_of(const Json& j) { return io::parse_matrix(j, ""); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "logconnect_test_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("check-flat on a commuting local model", "[cli]") {
  const auto r = run({"check-flat", fixture("local_commuting.json")});
  CHECK(r.code == 0);
  CHECK(r.verdict["status"] == "ok");
  CHECK(r.verdict["payload"] == Json::parse(R"({"flat": true})"));
  CHECK(run({"check-flat", fixture("local_noncommuting.json")}).code == 1);
}

TEST_CASE("monodromy of the quarter residue is diag(i, 1)", "[cli]") {
  const auto r = run({"monodromy", fixture("fuchsian_single_pole.json"), "--tol", "1e-10"});
  REQUIRE(r.code == 0);
  const ComplexMatrix m = matrix_of(r.verdict["payload"]["matrices"][0]);
  CHECK((m - diag({Complex(0, 1), 1.0})).norm() < 1e-8);
  CHECK(r.verdict["payload"]["convention"] == "antirepresentation");
  CHECK(r.verdict["payload"]["relation"] == true);

  const auto local = run({"monodromy", fixture("local_quarter.json"), "--loops", fixture("loop_unit_circle.json")});
  REQUIRE(local.code == 0);
  CHECK((matrix_of(local.verdict["payload"]["matrices"][0]) - diag({Complex(0, 1), 1.0})).norm() < 1e-8);

  const auto proj = run({"monodromy", fixture("riccati_quarter.json")});
  REQUIRE(proj.code == 0);
  CHECK(proj_equal(matrix_of(proj.verdict["payload"]["matrices"][0]), diag({Complex(0, 1), 1.0}), 1e-8));
}

TEST_CASE("exponent and lift-rep on the Heisenberg presentation", "[cli]") {
  const auto e = run({"exponent", fixture("heisenberg.json")});
  CHECK(e.code == 0);
  CHECK(e.verdict["payload"] == Json::parse(R"({"nu": 2})"));

  const auto one = run({"lift-rep", fixture("heisenberg.json")});
  CHECK(one.code == 1);
  const Json lam = one.verdict["payload"]["before"]["obstruction_scalars"][0];
  CHECK(std::abs(io::parse_complex(lam, "") + 1.0) < 1e-12);

  const auto two = run({"lift-rep", fixture("heisenberg.json"), "--nu", "2"});
  CHECK(two.code == 0);
  CHECK(two.verdict["payload"]["after"]["success"] == true);
}

TEST_CASE("schema errors surface pointers and exit 2", "[cli]") {
  const auto dup = run({"residues", fixture("bad_duplicate_poles.json")});
  CHECK(dup.code == 2);
  CHECK(dup.verdict["status"] == "error");
  CHECK(dup.verdict["payload"]["pointer"] == "/poles/1");
  CHECK(run({"residues", fixture("bad_residue_dim.json")}).verdict["payload"]["pointer"] == "/residues/1");
  CHECK(run({"check-flat", fixture("bad_malformed.json")}).code == 2);
  CHECK(run({"check-flat", fixture("missing.json")}).code == 2);

  std::ostringstream out, err;
  CHECK(cli::run({"frobnicate", fixture("heisenberg.json")}, out, err) == 2);
  CHECK(cli::run({"monodromy"}, out, err) == 2);
  CHECK(cli::run({"pullback", fixture("fuchsian_single_pole.json"), "--nu", "0"}, out, err) == 2);
}

TEST_CASE("tolerance resolution and output files", "[cli]") {
  ::setenv("LOGCONNECT_TOL", "not-a-number", 1);
  CHECK(run({"monodromy", fixture("fuchsian_single_pole.json")}).code == 2);
  ::setenv("LOGCONNECT_TOL", "1e-9", 1);
  CHECK(run({"monodromy", fixture("fuchsian_single_pole.json")}).code == 0);
  ::unsetenv("LOGCONNECT_TOL");
  cli::Options o;
  CHECK(cli::tolerance(o) == cli::kDefaultTolerance);
  o.tol = 1e-6;
  CHECK(cli::tolerance(o) == 1e-6);

  const auto path = scratch("exponent.json");
  std::ostringstream out, err;
  CHECK(cli::run({"exponent", fixture("heisenberg.json"), "--output", path.string()}, out, err) == 0);
  CHECK(out.str().empty());
  CHECK(Json::parse(std::ifstream(path))["payload"]["nu"] == 2);
}

TEST_CASE("emitted system artifacts re-parse and stay flat", "[cli]") {
  int artifacts = 0;
  for (const auto& e : corpus::manifest()) {
    if (e.exit != 0) continue;
    std::vector<std::string> args{e.verb, fixture(e.input)};
    args.insert(args.end(), e.args.begin(), e.args.end());
    const auto r = run(args);
    const Json& payload = r.verdict["payload"];
    if (!payload.is_object() || !payload.contains("type")) continue;
    ++artifacts;
    const auto path = scratch("artifact.json");
    std::ofstream(path) << payload.dump();
    CHECK_NOTHROW(io::parse_system(payload));
    const auto again = run({"check-flat", path.string()});
    INFO(e.verb << " " << e.input);
    CHECK(again.code == 0);
  }
  CHECK(artifacts >= 10);

  // projectivize then reconstruct recovers the original connection.
  const auto p = run({"projectivize", fixture("fuchsian_three_poles.json")});
  const auto path = scratch("riccati.json");
  std::ofstream(path) << p.verdict["payload"].dump();
  const auto back = run({"reconstruct", path.string()});
  const auto original = io::parse_fuchsian(cli::load(fixture("fuchsian_three_poles.json")));
  CHECK(io::parse_log_connection(back.verdict["payload"]) == LogConnection::from(original));
}

TEST_CASE("corpus exit codes match the manifest and output is byte-stable", "[cli][corpus]") {
  const auto entries = corpus::manifest();
  REQUIRE(entries.size() > 40);
  for (const auto& e : entries) {
    const auto first = corpus::run(e);
    const auto second = corpus::run(e);
    INFO(e.verb << " " << e.input);
    CHECK(first.exit == e.exit);
    CHECK(first.out == second.out);
    const Json v = Json::parse(first.out);
    const std::string expected = e.exit == 0 ? "ok" : e.exit == 1 ? "fail" : "error";
    CHECK(v["status"] == expected);
  }
}
