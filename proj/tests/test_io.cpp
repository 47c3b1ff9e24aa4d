#include "realnc/fixtures.hpp"
#include "realnc/json_io.hpp"
#include "realnc/sampling.hpp"
#include "realnc/verify.hpp"

#include "doctest.h"

using namespace realnc;

TEST_CASE("systems, points and polynomials round trip through JSON") {
  for (const auto& name : fixture_names()) {
    const Fixture fx = load_fixture(name);
    const Json js = system_to_json(fx.system);
    const OperatorSystem back = system_from_json(Json::parse(js.dump()));
    CHECK(system_to_json(back) == js);
    for (const auto& p : fx.points) {
      const Json jp = point_to_json(p.point);
      const ParsedPoint q = point_from_json(back, Json::parse(jp.dump()));
      CHECK_FALSE(q.is_complex);
      CHECK(point_to_json(q.point) == jp);
    }
    for (const auto& f : fx.functions) {
      const Json jf = polynomial_to_json(f.f);
      CHECK(polynomial_to_json(polynomial_from_json(Json::parse(jf.dump()))) == jf);
    }
  }
}

TEST_CASE("random matrices survive a text round trip bit for bit") {
  Rng rng(17);
  const Matrix a = random_gaussian(rng, 3, 4);
  const Matrix b = matrix_from_json(Json::parse(matrix_to_json(a).dump()));
  CHECK(a == b);
}

TEST_CASE("complex points parse to their realification") {
  const Fixture fx = load_fixture("interval");
  const Json j = Json::parse(R"({"level": 1, "images": [[[0.5]]], "imag": [[[0.0]]]})");
  const ParsedPoint p = point_from_json(fx.system, j);
  CHECK(p.is_complex);
  CHECK(p.point.level == 2);
  CHECK(point_to_json(p.complex_point)["imag"].size() == 1);
}

TEST_CASE("malformed input is a parse error") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IndeterminateNearBoundary;
  };
  CHECK(kind_of([] { matrix_from_json(Json::parse("[[1, 2], [3]]")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { matrix_from_json(Json::parse(R"([["a"]])")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { system_from_json(Json::parse(R"({"ambient_dim": 2})")); }) == ErrorKind::ParseError);
  CHECK(kind_of([] {
          system_from_json(Json::parse(R"({"ambient_dim": 2, "generators": [{"matrix": [[1,0],[0,-1]], "sign": 2}]})"));
        }) == ErrorKind::ParseError);
  CHECK(kind_of([] { polynomial_from_json(Json::parse(R"({"terms": [{"word": [0.5], "coeff": 1}]})")); }) ==
        ErrorKind::ParseError);
  CHECK(kind_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorKind::ParseError);
}

TEST_CASE("verdict JSON encodes an infinite margin as null") {
  const Json j = verdict_to_json(Verdict::exact(true));
  CHECK(j["margin"].is_null());
  CHECK(j["value"] == true);
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  set_tolerance(t, "feas=1e-8");
  set_tolerance(t, "uniq_tol=2e-6");
  set_tolerance(t, "max_level=8");
  CHECK(t.feas == 1e-8);
  CHECK(t.uniq == 2e-6);
  CHECK(t.max_level == 8);
  CHECK_THROWS_AS(set_tolerance(t, "bogus=1"), Error);
  CHECK_THROWS_AS(set_tolerance(t, "feas=abc"), Error);
  CHECK_THROWS_AS(set_tolerance(t, "feas"), Error);
  CHECK_THROWS_AS(set_tolerance(t, "feas=-1"), Error);
}

TEST_CASE("verify runner is deterministic and replayable") {
  const VerifyReport a = run_suite("systems", 5, true);
  const VerifyReport b = run_suite("systems", 5, false);
  CHECK(a.cases == b.cases);
  CHECK(a.passed == b.passed);
  CHECK(a.failures.empty());
  CHECK(instance_seed(5, "shuffle_of_real_point", 3) == instance_seed(5, "shuffle_of_real_point", 3));
  CHECK(instance_seed(5, "shuffle_of_real_point", 3) != instance_seed(5, "shuffle_of_real_point", 4));
  CHECK(run_case("shuffle_of_real_point", instance_seed(5, "shuffle_of_real_point", 3)).pass);
  CHECK_THROWS_AS(run_suite("nope", 1), Error);
  CHECK_THROWS_AS(run_case("nope", 1), Error);
}
