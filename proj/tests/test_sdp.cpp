#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"
#include "realnc/sdp.hpp"

#include "doctest.h"

using namespace realnc;

namespace {

NcPoint scalar(double v) {
  NcPoint p;
  p.images = {Matrix::Constant(1, 1, v)};
  return p;
}

SdpProblem trace_one(int d) {
  SdpProblem p;
  p.block_dims = {d};
  p.add_constraint(1.0).coeffs[0] = Matrix::Identity(d, d);
  return p;
}

}  // namespace

TEST_CASE("trace-one slice is feasible with the maximally mixed interior") {
  const FeasibilityResult r = solve_feasibility(trace_one(2));
  CHECK(r.feasible);
  CHECK(r.t_star == doctest::Approx(0.5).epsilon(1e-6));
  const FeasibilityResult d = solve_feasibility_dykstra(trace_one(2));
  CHECK(d.feasible);
  CHECK(d.heuristic);
}

TEST_CASE("an empty PSD slice is infeasible") {
  SdpProblem p;
  p.block_dims = {2};
  p.add_constraint(-1.0).coeffs[0] = Matrix::Identity(2, 2);
  CHECK_FALSE(solve_feasibility(p).feasible);
  CHECK_FALSE(solve_feasibility_dykstra(p, {}, 5000).feasible);
}

TEST_CASE("linear optimum: smallest eigenvalue of a symmetric matrix") {
  Matrix c(3, 3);
  c << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  SdpProblem p = trace_one(3);
  p.objective = {c};
  const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(c).eigenvalues()(0);
  CHECK(optimize_linear(p).value == doctest::Approx(lmin).epsilon(1e-6));
  CHECK(optimize_linear_bisection(p).value == doctest::Approx(lmin).epsilon(1e-5));
}

TEST_CASE("minimal face of a slice without interior") {
  // X 2x2 PSD with X_11 = 0 forces the face onto e_2.
  SdpProblem p = trace_one(2);
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  p.add_constraint(0.0).coeffs[0] = e11;
  const FaceResult f = minimal_face(p);
  CHECK(f.feasible);
  REQUIRE(f.basis[0].cols() == 1);
  CHECK(std::abs(f.basis[0](1, 0)) == doctest::Approx(1.0));
  CHECK(f.reductions >= 1);
}

TEST_CASE("Choi matrices and Kraus factors") {
  const Matrix c = identity_choi(2);
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  CHECK((choi_apply(c, a, 2) - a).norm() < 1e-14);
  const KrausForm k = kraus_factor(c, 2, 2, 1e-12);
  CHECK(k.rank == 1);
}

TEST_CASE("interval membership matches the closed form") {
  const Fixture fx = load_fixture("interval");
  CHECK(ucp_membership(fx.system, scalar(0.7)).member);
  CHECK(ucp_membership(fx.system, scalar(-1.0)).member);
  CHECK_FALSE(ucp_membership(fx.system, scalar(1.3)).member);
  const MembershipResult edge = ucp_membership(fx.system, scalar(1.0 + 1e-7));
  CHECK(edge.verdict.indeterminate);
}

TEST_CASE("skew membership is the unit ball of skew matrices") {
  const Fixture fx = load_fixture("skew");
  Rng rng(11);
  for (int n = 2; n <= 3; ++n) {
    Matrix a = random_signed(rng, n, -1);
    a /= Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    CHECK(ucp_membership(fx.system, make_point(fx.system, {Matrix(0.9 * a)})).member);
    CHECK_FALSE(ucp_membership(fx.system, make_point(fx.system, {Matrix(1.1 * a)})).member);
  }
}

TEST_CASE("hull membership over the interval characters") {
  const Fixture fx = load_fixture("interval");
  const std::vector<NcPoint> atoms = {fx.point("plus"), fx.point("minus")};
  CHECK(hull_membership(atoms, scalar(0.3)).member);
  CHECK_FALSE(hull_membership(atoms, scalar(1.4)).member);
  CHECK_FALSE(hull_membership({fx.point("plus")}, scalar(0.0)).member);
}

TEST_CASE("extension probe") {
  const Fixture fx = load_fixture("interval");
  const ExtensionProbe at_one = extension_set_probe(fx.system, fx.point("plus"));
  CHECK(at_one.member);
  CHECK(at_one.unique);
  // V is all of C*(V) here, so uniqueness only fails on the way to M_2.
  CHECK(extension_set_probe(fx.system, fx.point("zero")).unique);
  const ExtensionProbe at_zero = extension_set_probe(fx.system, fx.point("zero"), ProbeTarget::FullMatrixAlgebra);
  CHECK_FALSE(at_zero.unique);
  CHECK(at_zero.second_witness.size() == at_zero.witness.size());
  CHECK(at_zero.variation_dim >= 1);
}
