#include "realnc/envelope.hpp"
#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"

#include "doctest.h"

using namespace realnc;

namespace {

NcPoint scalar(double v) {
  NcPoint p;
  p.images = {Matrix::Constant(1, 1, v)};
  return p;
}

}  // namespace

TEST_CASE("polynomial evaluation") {
  Matrix a(2, 2);
  a << 1, 2, 2, 3;
  NcPoint x;
  x.level = 2;
  x.images = {a};
  const NcPolynomial f = NcPolynomial::scalar({{{}, 2.0}, {{0, 0}, 1.0}});
  CHECK((eval_poly(f, x) - (2.0 * Matrix::Identity(2, 2) + a * a)).norm() < 1e-14);
  CHECK(f.degree() == 2);
  CHECK(f.max_index() == 0);
  const NcPolynomial bad = NcPolynomial::scalar({{{1}, 1.0}});
  CHECK_THROWS_AS(eval_poly(bad, x), Error);
}

TEST_CASE("matrix-valued polynomials take the symmetric part") {
  NcPolynomial f;
  f.dim = 2;
  f.entries = {{{{}, 1.0}}, {{{0}, 1.0}}, {}, {{{0, 0}, 1.0}}};
  const Matrix v = eval_poly(f, scalar(3.0));
  Matrix expect(2, 2);
  expect << 1, 1.5, 1.5, 9;
  CHECK((v - expect).norm() < 1e-14);
}

TEST_CASE("complex pair c(f, g)") {
  const NcPolynomial f = NcPolynomial::scalar({{{0}, 1.0}});
  const NcPolynomial g = NcPolynomial::scalar({{{}, 1.0}});
  const Matrix v = eval_poly(complex_pair(f, g), scalar(2.0));
  CHECK((v - realify(Matrix::Constant(1, 1, 2.0), Matrix::Zero(1, 1))).norm() < 1e-14);
}

TEST_CASE("sampled convexity: X^2 is convex, -X^2 is not") {
  const Fixture fx = load_fixture("interval");
  CHECK(is_convex_sampled(fx.function("square"), fx.system, 100, 1).convex);
  const ConvexityVerdict neg = is_convex_sampled(fx.function("neg_square"), fx.system, 100, 1);
  CHECK_FALSE(neg.convex);
  CHECK(neg.witness_point.level >= 1);
  CHECK(is_convex_complex_sampled(fx.function("square"), fx.system, 100, 1).convex);
}

TEST_CASE("parallel and serial convexity sampling agree exactly") {
  const Fixture fx = load_fixture("skew");
  Rng rng(4);
  const NcPolynomial f = random_polynomial(rng, 1, 3, 4);
  const ConvexityVerdict a = is_convex_sampled(f, fx.system, 64, 99);
  const ConvexityVerdict b = is_convex_sampled_serial(f, fx.system, 64, 99);
  CHECK(a.convex == b.convex);
  CHECK(a.worst == b.worst);
}

TEST_CASE("envelope of -X^2 and X^2 on the interval") {
  const Fixture fx = load_fixture("interval");
  const Matrix h = Matrix::Identity(1, 1);
  const std::vector<NcPoint> atoms = {fx.point("plus"), fx.point("minus"), fx.point("zero")};
  const NcPolynomial neg = fx.function("neg_square");
  const EnvelopeResult r = convex_envelope_value(fx.system, neg, fx.point("zero"), make_atom_set(fx.system, atoms, neg), h);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(r.barycenter_residual < 1e-7);
  CHECK(jensen_check(neg, fx.point("zero"), r) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("atoms outside the state space are rejected") {
  const Fixture fx = load_fixture("interval");
  CHECK_THROWS_AS(make_atom_set(fx.system, {scalar(2.0)}, fx.function("square")), Error);
}

TEST_CASE("affine minorants") {
  const Fixture fx = load_fixture("interval");
  const NcPolynomial sq = fx.function("square");
  const std::vector<NcPoint> samples = {scalar(-1.0), scalar(-0.5), scalar(0.0), scalar(0.5), scalar(1.0)};
  const MinorantVerdict v = affine_minorant_check({0.0, 0.0}, sq, samples, scalar(0.0), Matrix::Identity(1, 1), 0.0);
  CHECK(v.valid);
  CHECK(v.weak_duality);
  CHECK_THROWS_AS(affine_minorant_check({0.1, 0.0}, sq, samples, scalar(0.0), Matrix::Identity(1, 1), 0.0), Error);
}

TEST_CASE("direction grid") {
  const MatrixList g = direction_grid(2);
  CHECK(g.size() == 5);
  for (const auto& h : g) CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues()(0) > -1e-15);
}

TEST_CASE("random convex quadratics pass the sampled test") {
  Rng rng(21);
  const OperatorSystem sys = random_system(rng, 3, {1, -1});
  const NcPolynomial f = random_convex_quadratic(rng, sys.signs(), 2);
  CHECK(is_convex_sampled(f, sys, 100, 5).convex);
}
