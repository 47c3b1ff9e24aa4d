#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"
#include "realnc/structure.hpp"

#include "doctest.h"

using namespace realnc;

TEST_CASE("commutant types of the division algebras") {
  CHECK(commutant_type({Matrix::Identity(1, 1)}).kind == CommutantKind::R);
  const CommutantType c = commutant_type({rotation_generator()});
  CHECK(c.kind == CommutantKind::C);
  CHECK((c.j_certificate * c.j_certificate + Matrix::Identity(2, 2)).norm() < 1e-10);
  const CommutantType h = commutant_type(quaternion_units());
  CHECK(h.kind == CommutantKind::H);
  CHECK(h.full_dim == 4);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  CHECK(commutant_type({d}).kind == CommutantKind::Reducible);
  CHECK(complex_commutant_dim({rotation_generator()}) == 4);
  CHECK(complex_commutant_dim({Matrix::Identity(1, 1)}) == 2);
}

TEST_CASE("generated algebras") {
  const Fixture sk = load_fixture("skew");
  const AlgebraBasis a = generate_algebra(sk.system);
  CHECK(a.closed);
  CHECK(a.basis.size() == 2);
  const Fixture q = load_fixture("quaternion");
  CHECK(generate_algebra(q.system).basis.size() == 4);
  const Fixture s3 = load_fixture("segment3");
  CHECK(generate_algebra(s3.system).basis.size() == 3);
}

TEST_CASE("Wedderburn decomposition of the fixtures") {
  Rng rng(7);
  const AlgebraDecomposition q = decompose_algebra(generate_algebra(load_fixture("quaternion").system), rng);
  REQUIRE(q.classes.size() == 1);
  CHECK(q.classes[0].block_size == 4);
  CHECK(q.classes[0].division_type == CommutantKind::H);
  const AlgebraDecomposition iv = decompose_algebra(generate_algebra(load_fixture("interval").system), rng);
  CHECK(iv.classes.size() == 2);
  CHECK(iv.completeness_residual < 1e-10);
}

TEST_CASE("equivalent blocks are grouped with an intertwiner") {
  Rng rng(9);
  const Matrix c = rotation_generator();
  const Matrix u = random_orthogonal(rng, 4);
  Matrix g = u.transpose() * block_diag({c, c}) * u;
  const OperatorSystem sys = validate_system(4, {{g, -1}});
  const AlgebraDecomposition d = decompose_algebra(generate_algebra(sys), rng);
  REQUIRE(d.classes.size() == 1);
  CHECK(d.classes[0].members.size() == 2);
  CHECK(d.blocks[0].multiplicity == 2);
}

TEST_CASE("intertwiners and cyclic subspaces") {
  Rng rng(13);
  const MatrixList q = quaternion_units();
  const Matrix u = random_orthogonal(rng, 4);
  MatrixList b;
  for (const auto& x : q) b.push_back(u * x * u.transpose());
  const Intertwiner t = find_intertwiner(q, b);
  REQUIRE(t.u.size() > 0);
  CHECK(t.residual < 1e-8);
  CHECK(find_intertwiner({rotation_generator()}, {Matrix(Matrix::Zero(2, 2))}).u.size() == 0);

  Matrix start = Matrix::Zero(4, 1);
  start(0, 0) = 1.0;
  CHECK(cyclic_subspace(q, start).cols() == 4);
}

TEST_CASE("coordinates and orthonormalization") {
  const MatrixList units = matrix_units(2);
  CHECK(units.size() == 4);
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  double res = 1.0;
  const Vector c = coordinates(units, x, &res);
  CHECK(res < 1e-15);
  CHECK(c.sum() == doctest::Approx(10.0));
  CHECK(orthonormalize({x, Matrix(2.0 * x)}).size() == 1);
}
