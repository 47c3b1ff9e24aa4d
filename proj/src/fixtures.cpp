#include "realnc/fixtures.hpp"

namespace realnc {

namespace {

NcPoint scalar_point(double v) {
  NcPoint p;
  p.level = 1;
  p.images = {Matrix::Constant(1, 1, v)};
  return p;
}

NcPolynomial square(double c) { return NcPolynomial::scalar({{{0, 0}, c}}); }

Fixture skew_fixture() {
  Fixture f;
  f.name = "skew";
  f.provenance = "complex numbers as real 2x2 matrices: V = span{I, c(i)} = C*(V); K_1 = {0}";
  f.system = validate_system(2, {{rotation_generator(), -1}}, {}, "skew");
  NcPoint zero;
  zero.level = 1;
  zero.images = {Matrix::Zero(1, 1)};
  f.points.push_back({"zero", zero, "the only level-1 state: pure, not maximal (compression of c(i) by (1,0))"});
  NcPoint ci;
  ci.level = 2;
  ci.images = {rotation_generator()};
  f.points.push_back({"ci", ci, "identity representation: extreme, complex-reducible"});
  f.functions.push_back({"square", square(1.0)});
  return f;
}

Fixture quaternion_fixture() {
  Fixture f;
  f.name = "quaternion";
  f.provenance = "quaternions H inside M_4(R) by left multiplication; unique real irreducible representation";
  const MatrixList q = quaternion_units();
  // Relations i^2 = j^2 = k^2 = -1 and ij = k.
  const Matrix eye = Matrix::Identity(4, 4);
  for (const auto& u : q) {
    if ((u * u + eye).norm() > 1e-14) throw Error(ErrorKind::ParseError, "quaternion unit does not square to -1");
  }
  if ((q[0] * q[1] - q[2]).norm() > 1e-14) throw Error(ErrorKind::ParseError, "quaternion relation ij = k fails");
  f.system = validate_system(4, {{q[0], -1}, {q[1], -1}, {q[2], -1}}, {}, "quaternion");
  NcPoint re;
  re.level = 2;
  re.images = {rotation_generator(), Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  f.points.push_back({"re_compression", re, "compression to span{1, i}: pure but not maximal"});
  NcPoint id;
  id.level = 4;
  id.images = q;
  f.points.push_back({"identity", id, "the 4-dimensional irreducible representation: extreme"});
  return f;
}

Fixture interval_fixture() {
  Fixture f;
  f.name = "interval";
  f.provenance = "span{I, diag(1,-1)}: affine functions on [-1, 1], envelope l-infinity_2";
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  g(1, 1) = -1.0;
  f.system = validate_system(2, {{g, 1}}, {}, "interval");
  f.points.push_back({"plus", scalar_point(1.0), "character at +1: extreme"});
  f.points.push_back({"minus", scalar_point(-1.0), "character at -1: extreme"});
  f.points.push_back({"zero", scalar_point(0.0), "midpoint of the two characters: not pure"});
  f.functions.push_back({"square", square(1.0)});
  f.functions.push_back({"neg_square", square(-1.0)});
  return f;
}

Fixture segment3_fixture() {
  Fixture f;
  f.name = "segment3";
  f.provenance = "span{I, diag(1,-1,0)} in M_3(R): the character at 0 is not a boundary representation";
  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 1.0;
  g(1, 1) = -1.0;
  f.system = validate_system(3, {{g, 1}}, {}, "segment3");
  f.points.push_back({"plus", scalar_point(1.0), "boundary character at +1"});
  f.points.push_back({"minus", scalar_point(-1.0), "boundary character at -1"});
  f.points.push_back({"zero", scalar_point(0.0), "interior character at 0"});
  f.functions.push_back({"square", square(1.0)});
  return f;
}

}  // namespace

Matrix rotation_generator() {
  Matrix c(2, 2);
  c << 0.0, -1.0, 1.0, 0.0;
  return c;
}

MatrixList quaternion_units() {
  Matrix li = Matrix::Zero(4, 4), lj = Matrix::Zero(4, 4), lk = Matrix::Zero(4, 4);
  // Columns are the images of 1, i, j, k.
  li(1, 0) = 1;
  li(0, 1) = -1;
  li(3, 2) = 1;
  li(2, 3) = -1;
  lj(2, 0) = 1;
  lj(3, 1) = -1;
  lj(0, 2) = -1;
  lj(1, 3) = 1;
  lk(3, 0) = 1;
  lk(2, 1) = 1;
  lk(1, 2) = -1;
  lk(0, 3) = -1;
  return {li, lj, lk};
}

const NcPoint& Fixture::point(const std::string& key) const {
  for (const auto& p : points) {
    if (p.name == key) return p.point;
  }
  throw Error(ErrorKind::UnknownFixture, "fixture " + name + " has no point " + key);
}

const NcPolynomial& Fixture::function(const std::string& key) const {
  for (const auto& p : functions) {
    if (p.name == key) return p.f;
  }
  throw Error(ErrorKind::UnknownFixture, "fixture " + name + " has no function " + key);
}

std::vector<std::string> fixture_names() { return {"skew", "quaternion", "interval", "segment3"}; }

Fixture load_fixture(const std::string& name) {
  if (name == "skew") return skew_fixture();
  if (name == "quaternion") return quaternion_fixture();
  if (name == "interval") return interval_fixture();
  if (name == "segment3") return segment3_fixture();
  throw Error(ErrorKind::UnknownFixture, "unknown fixture '" + name + "'");
}

}  // namespace realnc
