#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"
#include "realnc/systems.hpp"

#include "doctest.h"

#include <unsupported/Eigen/KroneckerProduct>

using namespace realnc;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("validate_system enforces signs exactly and rejects bad input") {
  Matrix g = m2(0, -1, 1 + 1e-12, 0);
  const OperatorSystem sys = validate_system(2, {{g, -1}});
  CHECK(sys.generators[0].matrix == Matrix(-sys.generators[0].matrix.transpose()));
  CHECK(sys.correction_norm > 0.0);

  CHECK_THROWS_AS(validate_system(2, {{Matrix::Identity(3, 3), 1}}), Error);
  try {
    validate_system(2, {{m2(1, 0, 0, 1), 1}});
    FAIL("identity generator accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DependentGenerators);
  }
  try {
    validate_system(2, {{m2(1, 2, 0, 1), 1}});
    FAIL("non-symmetric generator accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SignViolation);
  }
}

TEST_CASE("make_point checks sizes, signs and the level cap") {
  const Fixture fx = load_fixture("skew");
  CHECK_THROWS_AS(make_point(fx.system, {Matrix::Identity(2, 2)}), Error);
  CHECK_THROWS_AS(make_point(fx.system, {Matrix::Zero(2, 3)}), Error);
  Tolerances tol;
  tol.max_level = 2;
  CHECK_NOTHROW(make_point(fx.system, {Matrix::Zero(2, 2)}, tol));
  CHECK_THROWS_AS(make_point(fx.system, {Matrix::Zero(3, 3)}, tol), Error);
}

TEST_CASE("realify and u_compress are inverse") {
  Rng rng(3);
  const Matrix x = random_gaussian(rng, 3, 3), y = random_gaussian(rng, 3, 3);
  const Matrix c = realify(x, y);
  const Matrix w = w_matrix(3);
  CHECK((w.transpose() * c * w - c).norm() < 1e-14);
  const auto [a, b] = u_compress(c);
  CHECK((a - x).norm() < 1e-14);
  CHECK((b - y).norm() < 1e-14);
  Matrix bad = c;
  bad(0, 0) += 1.0;
  CHECK_THROWS_AS(u_compress(bad), Error);
}

TEST_CASE("shuffle permutation turns x + x into x kron I_2") {
  const Matrix x = m2(1, 2, 3, 4);
  const Matrix p = shuffle_permutation(2);
  CHECK((p.transpose() * p - Matrix::Identity(4, 4)).norm() == 0.0);
  const Matrix lhs = p.transpose() * block_diag({x, x}) * p;
  CHECK((lhs - Eigen::kroneckerProduct(x, Matrix::Identity(2, 2)).eval()).norm() < 1e-15);
}

TEST_CASE("compressions and nc combinations agree") {
  Rng rng(5);
  const Fixture fx = load_fixture("quaternion");
  const NcPoint y = fx.point("identity");
  const Matrix a = random_isometry(rng, 4, 2);
  const NcPoint x = compress_point(y, make_isometry(a));
  CHECK(x.level == 2);
  const NcPoint z = nc_combination({y}, {a});
  for (std::size_t j = 0; j < x.images.size(); ++j) CHECK((x.images[j] - z.images[j]).norm() < 1e-13);
  // The compression keeps exact skew symmetry.
  for (const auto& im : x.images) CHECK(im == Matrix(-im.transpose()));
  CHECK_THROWS_AS(nc_combination({y}, {Matrix(2.0 * a)}), Error);
}

TEST_CASE("make_isometry re-orthonormalizes within tolerance only") {
  Matrix a = Matrix::Identity(3, 2);
  a(2, 0) = 1e-11;
  const Isometry iso = make_isometry(a);
  CHECK((iso.matrix.transpose() * iso.matrix - Matrix::Identity(2, 2)).norm() < 1e-15);
  a(2, 0) = 1e-3;
  CHECK_THROWS_AS(make_isometry(a), Error);
}

TEST_CASE("complexified points and the doubled system") {
  const Fixture fx = load_fixture("interval");
  const ComplexifiedPoint cp = complexify_point(fx.system, {Matrix::Constant(1, 1, 0.25)}, {Matrix::Constant(1, 1, 0.0)});
  CHECK(cp.realified.level == 2);
  CHECK((cp.realified.images[0] - 0.25 * Matrix::Identity(2, 2)).norm() == 0.0);
  const OperatorSystem d = doubled_system(fx.system);
  CHECK(d.ambient_dim == 4);
  CHECK(doubled_point(cp.z).level == 2);
}

TEST_CASE("direct sums keep symmetry types") {
  const Fixture fx = load_fixture("skew");
  const NcPoint s = direct_sum({fx.point("zero"), fx.point("ci")});
  CHECK(s.level == 3);
  CHECK(s.images[0] == Matrix(-s.images[0].transpose()));
}
