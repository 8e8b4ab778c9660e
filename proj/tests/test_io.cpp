#include <catch_amalgamated.hpp>

#include "logconnect/io.hpp"
#include "support.hpp"

using namespace logconnect;
using io::Json;
using support::Gen;

namespace {

template <class F>
std::string pointer_of(F&& f) {
  try {
    f();
  } catch (const SchemaError& e) {
    CHECK(e.code() == ErrorCode::SchemaViolation);
    return e.pointer();
  }
  FAIL("expected a schema error");
  return {};
}

Json fuchsian_doc() {
  return Json::parse(R"({"type": "fuchsian", "rank": 2, "poles": [[0, 0], [1, 0]],
    "residues": [[[["1/4", 0], [0, 0]], [[0, 0], [0, 0]]],
                 [[[0, 0], [1, 0]], [[0, 0], ["-1/2", "1/3"]]]]})");
}

}  // namespace

TEST_CASE("scalars parse from pairs, numbers and fraction strings", "[io]") {
  CHECK(io::parse_scalar(Json::parse(R"(["1/3", 2])"), "/x") == GaussianRational(mpq_class(1, 3), mpq_class(2)));
  CHECK(io::parse_scalar(Json(0.5), "/x") == GaussianRational(mpq_class(1, 2)));
  CHECK(io::parse_scalar(Json("-7/4"), "/x") == GaussianRational(mpq_class(-7, 4)));
  CHECK(io::parse_scalar(Json(12345678901LL), "/x") == GaussianRational(mpq_class("12345678901")));
  CHECK(pointer_of([] { io::parse_scalar(Json("1/0"), "/x"); }) == "/x");
  CHECK(pointer_of([] { io::parse_scalar(Json::parse("[1, 2, 3]"), "/y"); }) == "/y");
  CHECK(pointer_of([] { io::parse_scalar(Json(true), "/z"); }) == "/z");

  CHECK(io::scalar_json(GaussianRational(mpq_class(1, 4))).dump() == "[0.25,0]");
  CHECK(io::scalar_json(GaussianRational(mpq_class(1, 3), mpq_class(-2))).dump() == R"(["1/3",-2])");
}

TEST_CASE("well-formed Fuchsian documents parse", "[io]") {
  const FuchsianSystem f = io::parse_fuchsian(fuchsian_doc());
  CHECK(f.rank == 2);
  REQUIRE(f.poles.size() == 2);
  CHECK(f.residues[0](0, 0) == GaussianRational(mpq_class(1, 4)));
  CHECK(f.residues[1](1, 1) == GaussianRational(mpq_class(-1, 2), mpq_class(1, 3)));
  CHECK(std::holds_alternative<FuchsianSystem>(io::parse_system(fuchsian_doc())));
}

TEST_CASE("schema violations carry JSON pointers", "[io]") {
  Json mismatch = fuchsian_doc();
  mismatch["residues"][1] = Json::parse(R"([[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]])");
  CHECK(pointer_of([&] { io::parse_fuchsian(mismatch); }).rfind("/residues/1", 0) == 0);

  Json dup = fuchsian_doc();
  dup["poles"][1] = Json::parse("[0, 0]");
  try {
    io::parse_fuchsian(dup);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.pointer() == "/poles/1");
    CHECK(std::string(e.what()).find("distinct") != std::string::npos);
  }

  Json missing = fuchsian_doc();
  missing.erase("rank");
  CHECK(pointer_of([&] { io::parse_fuchsian(missing); }) == "/rank");

  Json count = fuchsian_doc();
  count["residues"].erase(1);
  CHECK(pointer_of([&] { io::parse_fuchsian(count); }) == "/residues");

  Json bad_type = fuchsian_doc();
  bad_type["type"] = "sheaf";
  CHECK(pointer_of([&] { io::parse_system(bad_type); }) == "/type");

  const Json bad_arc = Json::parse(R"({"basepoint": [1, 0], "segments": [{"kind": "spiral"}]})");
  CHECK(pointer_of([&] { io::parse_loop(bad_arc); }) == "/segments/0/kind");
  const Json open = Json::parse(R"({"basepoint": [1, 0], "segments": [{"kind": "line", "to": [2, 0]}]})");
  CHECK(pointer_of([&] { io::parse_loop(open); }) == "/segments");

  const Json riccati = Json::parse(R"({"type": "riccati", "rank": 3, "dim": 1,
    "b": [[0], [0]], "delta": [[0], [0]], "c": [[0], [0]], "offdiag": [[0, [0]], [[0], null]]})");
  CHECK(pointer_of([&] { io::parse_riccati(riccati); }) == "/offdiag/0/0");
}

TEST_CASE("presentation documents", "[io]") {
  const Json doc = Json::parse(R"({"rank": 2,
    "generators": {"g1": [[0, 1], [1, 0]], "g2": [[1, 0], [0, -1]]},
    "relations": [["g1", "g2", "g1^-1", "g2^-1"]]})");
  const auto p = io::parse_presentation(doc);
  REQUIRE(p.names() == std::vector<std::string>{"g1", "g2"});
  REQUIRE(p.relations().size() == 1);
  CHECK(p.relations()[0][2].power == -1);

  Json unknown = doc;
  unknown["relations"][0][1] = "g7";
  CHECK(pointer_of([&] { io::parse_presentation(unknown); }) == "/relations/0/1");

  Json broken = doc;
  broken["generators"]["g2"] = Json::parse("[[1, 0], [0, 2]]");
  CHECK(pointer_of([&] { io::parse_presentation(broken); }) == "/relations");

  Json singular = doc;
  singular["generators"]["g1"] = Json::parse("[[1, 1], [1, 1]]");
  CHECK(pointer_of([&] { io::parse_presentation(singular); }) == "/generators/g1");

  Json poles = doc;
  poles["poles"] = Json::parse(R"({"g1": 0, "g2": [0, 0]})");
  CHECK(pointer_of([&] { io::parse_presentation(poles); }) == "/poles/g2");
}

TEST_CASE("exact systems round-trip through JSON", "[io][property]") {
  Gen g(61);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = support::random_fuchsian(g, std::size_t(g.integer(1, 4)), std::size_t(g.integer(1, 3)));
    const Json j = io::to_json(f);
    const FuchsianSystem back = io::parse_fuchsian(Json::parse(j.dump()));
    CHECK(back.poles == f.poles);
    for (std::size_t i = 0; i < f.residues.size(); ++i) CHECK(back.residues[i] == f.residues[i]);
    CHECK(io::to_json(back).dump() == j.dump());

    const LogConnection c = LogConnection::from(f);
    const Json cj = io::to_json(c);
    const LogConnection cb = io::parse_log_connection(Json::parse(cj.dump()));
    CHECK(cb == c);
    CHECK(io::to_json(cb).dump() == cj.dump());

    const RiccatiSystem r = projectivize(c);
    const RiccatiSystem rb = io::parse_riccati(Json::parse(io::to_json(r).dump()));
    CHECK(rb == r);
  }

  LocalModel l;
  l.rank = 2;
  l.dim = 3;
  l.residues = {g.exact_matrix(2), g.exact_matrix(2)};
  const LocalModel lb = io::parse_local_model(io::to_json(l));
  CHECK(lb.dim == 3);
  CHECK(lb.residues == l.residues);
}

TEST_CASE("loops round-trip through JSON", "[io]") {
  const LoopSet set = standard_loops({Complex(0), Complex(1), Complex(-1)}, Complex(3.0));
  for (const auto& loop : set.loops) {
    const Json j = io::to_json(loop);
    const LoopPath back = io::parse_loop(Json::parse(j.dump()));
    REQUIRE(back.segments().size() == loop.segments().size());
    CHECK(back.basepoint() == loop.basepoint());
    CHECK(io::to_json(back).dump() == j.dump());
  }
  const auto list = io::parse_loops(Json::parse(R"({"loops": [{"basepoint": [1, 0],
    "segments": [{"kind": "arc", "center": [0, 0], "radius": 1, "from_angle": 0, "to_angle": 6.283185307179586}]}]})"));
  CHECK(list.size() == 1);
}
