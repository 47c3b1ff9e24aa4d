#include "realnc/verify.hpp"

#include "realnc/envelope.hpp"
#include "realnc/extremal.hpp"
#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"
#include "realnc/sdp.hpp"
#include "realnc/structure.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace realnc {

namespace {

using Outcome = CaseOutcome;

Outcome ok() { return {}; }
Outcome fail(const std::string& msg) { return {false, false, msg}; }
Outcome undecided(const std::string& msg) { return {true, true, msg}; }

template <typename T>
std::string str(const T& v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

double max_diff(const MatrixList& a, const MatrixList& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return d;
}

std::complex<double> cgauss(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

ComplexMatrix random_complex(Rng& rng, int n) {
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = cgauss(rng);
  }
  return z;
}

const Fixture& fixture(const std::string& name) {
  static const std::vector<Fixture> all = [] {
    std::vector<Fixture> v;
    for (const auto& n : fixture_names()) v.push_back(load_fixture(n));
    return v;
  }();
  for (const auto& f : all) {
    if (f.name == name) return f;
  }
  throw Error(ErrorKind::UnknownFixture, name);
}

const Fixture& random_fixture(Rng& rng) {
  static const std::vector<std::string> names = fixture_names();
  return fixture(names[rng() % names.size()]);
}

/// Members with both maximal and non-maximal representatives: fixture points, random compressions,
/// and orthogonal conjugates of direct sums of fixture points.
NcPoint random_test_member(const Fixture& fx, Rng& rng) {
  const int kind = static_cast<int>(rng() % 3);
  if (kind == 0) {
    const NcPoint& p = fx.points[rng() % fx.points.size()].point;
    return compress_point(p, Isometry{random_orthogonal(rng, p.level)});
  }
  if (kind == 1) {
    std::uniform_int_distribution<int> lev(1, 3);
    return random_member(fx.system, rng, lev(rng));
  }
  const NcPoint& a = fx.points[rng() % fx.points.size()].point;
  const NcPoint& b = fx.points[rng() % fx.points.size()].point;
  const NcPoint s = direct_sum({a, b});
  if (s.level > 6) return a;
  return compress_point(s, Isometry{random_orthogonal(rng, s.level)});
}

// ---------------------------------------------------------------- systems

Outcome realify_homomorphism(Rng& rng) {
  const ComplexMatrix z = random_complex(rng, 3), w = random_complex(rng, 3);
  const ComplexMatrix zw = z * w;
  const double mult = (realify(zw.real(), zw.imag()) - realify(z.real(), z.imag()) * realify(w.real(), w.imag())).norm();
  const ComplexMatrix za = z.adjoint();
  const double adj = (realify(za.real(), za.imag()) - realify(z.real(), z.imag()).transpose()).norm();
  if (mult > 1e-12 * std::max(1.0, zw.norm()) || adj > 1e-12) return fail("c(zw) != c(z)c(w): " + str(mult));
  return ok();
}

Outcome u_compress_roundtrip(Rng& rng) {
  const Matrix x = random_gaussian(rng, 3, 3), y = random_gaussian(rng, 3, 3);
  const auto [a, b] = u_compress(realify(x, y));
  const double d = std::max((a - x).norm(), (b - y).norm());
  if (d > 1e-12) return fail("u_compress(realify(x,y)) off by " + str(d));
  return ok();
}

Outcome combination_is_compression(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  std::vector<NcPoint> pts;
  int total = 0;
  for (int i = 0; i < 3; ++i) {
    pts.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2)));
    total += pts.back().level;
  }
  const int n = 1 + static_cast<int>(rng() % 2);
  const Matrix stacked = random_isometry(rng, total, n);
  MatrixList coeffs;
  int off = 0;
  for (const auto& p : pts) {
    coeffs.push_back(stacked.middleRows(off, p.level));
    off += p.level;
  }
  const NcPoint a = nc_combination(pts, coeffs);
  const NcPoint b = compress_point(direct_sum(pts), Isometry{stacked});
  const double d = max_diff(a.images, b.images);
  if (d > 1e-12) return fail("nc_combination differs from compression by " + str(d));
  return ok();
}

Outcome compression_keeps_signs(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPoint y = random_member(fx.system, rng, 3);
  const NcPoint x = compress_point(y, Isometry{random_isometry(rng, 3, 2)});
  for (std::size_t j = 0; j < x.images.size(); ++j) {
    const int s = fx.system.generators[j].sign;
    if ((x.images[j].transpose() - s * x.images[j]).norm() != 0.0) return fail("sign pattern lost at generator " + str(j));
  }
  return ok();
}

Outcome shuffle_of_real_point(Rng& rng) {
  const int n = 1 + static_cast<int>(rng() % 4);
  const Matrix x = random_gaussian(rng, n, n);
  const Matrix r = realify(x, Matrix::Zero(n, n));
  const Matrix ds = block_diag({x, x});
  const Matrix p = shuffle_permutation(n);
  const Matrix inter = Eigen::kroneckerProduct(x, Matrix::Identity(2, 2)).eval();
  const double d1 = (r - ds).norm();
  const double d2 = (p.transpose() * r * p - inter).norm();
  if (d1 > 0.0 || d2 > 1e-14) return fail("shuffle identity off by " + str(std::max(d1, d2)));
  return ok();
}

Outcome validation_rejects(Rng& rng) {
  const int m = 2 + static_cast<int>(rng() % 3);
  Matrix s = random_signed(rng, m, 1);
  try {
    validate_system(m, {{s, -1}});
    return fail("symmetric generator accepted with sign -1");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SignViolation) return fail(std::string("wrong error ") + e.what());
  }
  try {
    validate_system(m, {{s, 1}, {Matrix(2.0 * s + Matrix::Identity(m, m)), 1}});
    return fail("dependent generators accepted");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DependentGenerators) return fail(std::string("wrong error ") + e.what());
  }
  return ok();
}

// ---------------------------------------------------------------- sdp

Outcome skew_membership_sandwich(Rng& rng) {
  const Fixture& fx = fixture("skew");
  const int n = 2 + static_cast<int>(rng() % 2);
  Matrix x = random_signed(rng, n, -1);
  const double norm = Eigen::JacobiSVD<Matrix>(x).singularValues()(0);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  double target = u(rng);
  if (std::abs(target - 1.0) < 1e-3) target = 0.5;
  x *= target / norm;
  const MembershipResult r = ucp_membership(fx.system, make_point(fx.system, {x}));
  if (r.verdict.indeterminate) return undecided("membership too close to call");
  if (r.member != (target <= 1.0)) return fail("skew norm " + str(target) + " member=" + str(r.member));
  return ok();
}

Outcome interval_membership_sandwich(Rng& rng) {
  const Fixture& fx = fixture("interval");
  const int n = 1 + static_cast<int>(rng() % 3);
  Matrix x = random_signed(rng, n, 1);
  const double norm = Eigen::JacobiSVD<Matrix>(x).singularValues()(0);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  double target = u(rng);
  if (std::abs(target - 1.0) < 1e-3) target = 0.5;
  x *= target / norm;
  const MembershipResult r = ucp_membership(fx.system, make_point(fx.system, {x}));
  if (r.verdict.indeterminate) return undecided("membership too close to call");
  if (r.member != (target <= 1.0)) return fail("interval norm " + str(target) + " member=" + str(r.member));
  return ok();
}

Outcome dykstra_agrees(Rng& rng) {
  const Fixture& fx = fixture("interval");
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  const double v = rng() % 2 ? u(rng) : 1.2 + 0.5 * std::abs(u(rng));
  NcPoint x;
  x.level = 1;
  x.images = {Matrix::Constant(1, 1, v)};
  const SdpProblem p = extension_problem(fx.system, x);
  const FeasibilityResult a = solve_feasibility(p);
  const FeasibilityResult b = solve_feasibility_dykstra(p);
  if (a.feasible != b.feasible) return fail("IPM and alternating projections disagree at x = " + str(v));
  return ok();
}

Outcome optimum_matches_bisection(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPoint x = random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2));
  SdpProblem p = extension_problem(fx.system, x);
  p.objective = {sym(random_gaussian(rng, p.block_dims[0], p.block_dims[0]))};
  const OptimumResult a = optimize_linear(p);
  const OptimumResult b = optimize_linear_bisection(p);
  if (std::abs(a.value - b.value) > 1e-5) return fail("optimum " + str(a.value) + " vs bisection " + str(b.value));
  return ok();
}

Outcome combination_in_hull(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  std::vector<NcPoint> atoms;
  int total = 0;
  for (int i = 0; i < 2; ++i) {
    atoms.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2)));
    total += atoms.back().level;
  }
  const int n = 1 + static_cast<int>(rng() % std::min(2, total));
  const Matrix stacked = random_isometry(rng, total, n);
  const NcPoint x = compress_point(direct_sum(atoms), Isometry{stacked});
  const HullResult h = hull_membership(atoms, x);
  if (h.verdict.indeterminate) return undecided("hull verdict too close to call");
  if (!h.member) return fail("nc combination of the atoms reported outside their hull");
  return ok();
}

Outcome probe_examples(Rng& rng) {
  // Trivial system: the only extension is the unit.
  const OperatorSystem triv = validate_system(1 + static_cast<int>(rng() % 2), {});
  const NcPoint z = zero_point(triv, 2);
  if (!extension_set_probe(triv, z).unique) return fail("trivial system extension not unique");
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const OperatorSystem flip = validate_system(2, {{sx, 1}});
  NcPoint x;
  x.level = 1;
  x.images = {Matrix::Zero(1, 1)};
  const ExtensionProbe full = extension_set_probe(flip, x, ProbeTarget::FullMatrixAlgebra);
  if (full.unique) return fail("extensions of x = 0 to M_2 should not be unique");
  return ok();
}

// ---------------------------------------------------------------- structure

Outcome conjugation_invariance(Rng& rng) {
  const int m = 3 + static_cast<int>(rng() % 2);
  std::vector<int> signs = {1, static_cast<int>(rng() % 2) ? 1 : -1};
  // Block-structured system so that the decomposition is non-trivial.
  const int k = 1 + static_cast<int>(rng() % (m - 1));
  std::vector<Generator> raw;
  for (int s : signs) {
    raw.push_back({block_diag({random_signed(rng, k, s), random_signed(rng, m - k, s)}), s});
  }
  const OperatorSystem sys = validate_system(m, raw);
  const Matrix u = random_orthogonal(rng, m);
  std::vector<Generator> conj;
  for (const auto& g : sys.generators) conj.push_back({u.transpose() * g.matrix * u, g.sign});
  const OperatorSystem csys = validate_system(m, conj);
  Rng r1(rng()), r2(rng());
  const AlgebraDecomposition d1 = decompose_algebra(generate_algebra(sys), r1);
  const AlgebraDecomposition d2 = decompose_algebra(generate_algebra(csys), r2);
  auto ms = [](const AlgebraDecomposition& d) {
    std::vector<std::pair<int, int>> v;
    for (const auto& c : d.classes) v.emplace_back(c.block_size * 10 + static_cast<int>(c.division_type), static_cast<int>(c.members.size()));
    std::sort(v.begin(), v.end());
    return v;
  };
  if (ms(d1) != ms(d2)) return fail("block multiset changed under orthogonal conjugation");
  MatrixList a, b;
  for (const auto& g : sys.generators) a.push_back(g.matrix);
  for (const auto& g : csys.generators) b.push_back(g.matrix);
  if (commutant(a).dim != commutant(b).dim) return fail("commutant dimension changed under conjugation");
  return ok();
}

Outcome fixture_types(Rng& rng) {
  const MatrixList q = quaternion_units();
  if (commutant_type(q).kind != CommutantKind::H) return fail("quaternion representation not of type H");
  const Matrix c = rotation_generator();
  const Matrix u = random_orthogonal(rng, 2);
  if (commutant_type({Matrix(u.transpose() * c * u)}).kind != CommutantKind::C) return fail("c(i) not of type C");
  const Matrix s = random_signed(rng, 3, 1);
  if (commutant_type({s}).kind != CommutantKind::Reducible) return fail("symmetric 3x3 matrix not reducible");
  if (commutant_type({block_diag({c, c})}).kind != CommutantKind::Reducible) return fail("c(i) + c(i) not reducible");
  return ok();
}

Outcome decomposition_complete(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const AlgebraDecomposition d = decompose_algebra(generate_algebra(fx.system), rng);
  if (d.completeness_residual > 1e-8) return fail("block isometries do not resolve the identity: " + str(d.completeness_residual));
  return ok();
}

// ---------------------------------------------------------------- extremal

Outcome classification_invariants(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPoint x = random_test_member(fx, rng);
  const Classification c = classify(fx.system, x);
  if (!c.member) return fail("generated member not recognized");
  if (c.extreme != (c.pure && c.maximal)) return fail("extreme != pure and maximal");
  if (c.extreme_in_complexification != (c.extreme && c.irreducible_complex)) return fail("complexified extremality flag");
  if (c.pure && !c.irreducible_real) return fail("pure point is reducible");
  if (c.indeterminate) return undecided("classification too close to call");
  return ok();
}

Outcome maximal_under_doubling(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPoint x = random_test_member(fx, rng);
  const SystemContext ctx = make_context(fx.system);
  const MaximalityCertificate a = is_maximal(ctx, x);
  const MaximalityCertificate b = is_maximal(ctx, direct_sum({x, x}));
  if (a.verdict.indeterminate || b.verdict.indeterminate) {
    if (a.verdict.indeterminate && b.verdict.indeterminate) return ok();
    return undecided("one maximality verdict too close to call");
  }
  if (a.value != b.value) return fail("maximal(x) = " + str(a.value) + " but maximal(x + x) = " + str(b.value));
  return ok();
}

Outcome complex_maximal_routes(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  ComplexNcPoint z;
  if (rng() % 2) {
    z = random_complex_member(fx.system, rng, 1 + static_cast<int>(rng() % 2));
  } else {
    const NcPoint x = random_test_member(fx, rng);
    if (x.level > 4) return ok();
    z.level = x.level;
    z.real_part = x.images;
    for (const auto& a : x.images) z.imag_part.push_back(Matrix::Zero(a.rows(), a.cols()));
  }
  const SystemContext ctx = make_context(fx.system);
  const MaximalityCertificate a = complex_maximal(ctx, z);
  const MaximalityCertificate b = complex_maximal_doubled(fx.system, z);
  if (a.verdict.indeterminate || b.verdict.indeterminate) return undecided("complex maximality too close to call");
  if (a.value != b.value) return fail("realification route " + str(a.value) + " vs doubled-system route " + str(b.value));
  return ok();
}

Outcome realified_extreme_descends(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPoint x = random_test_member(fx, rng);
  if (x.level > 3) return ok();
  const SystemContext ctx = make_context(fx.system);
  const Classification cr = classify(ctx, direct_sum({x, x}));
  if (!cr.extreme) return ok();
  const Classification c = classify(ctx, x);
  if (!c.extreme) return fail("realified complexification extreme but x is not");
  return ok();
}

Outcome level_one_bridge(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  NcPoint x = random_member(fx.system, rng, 1);
  if (rng() % 2) {
    for (const auto& p : fx.points) {
      if (p.point.level == 1) x = p.point;
    }
  }
  const Classification c = classify(fx.system, x);
  if (c.indeterminate) return undecided("level-1 classification too close to call");
  if (c.extreme != c.extreme_in_complexification) return fail("level-1 extreme flags differ");
  return ok();
}

Outcome dilation_is_maximal(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPoint x = random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2));
  SystemContext ctx = make_context(fx.system);
  const DilationResult d = maximal_dilation(ctx, x);
  if (d.compression_residual > 1e-8) return fail("compression residual " + str(d.compression_residual));
  if (d.maximal_certificate.maximal_verdict.indeterminate) return undecided("dilation maximality too close to call");
  if (!d.maximal_certificate.maximal) return fail("dilated point not classified maximal");
  return ok();
}

Outcome krein_milman_skew(Rng& rng) {
  const Fixture& fx = fixture("skew");
  const int n = 1 + static_cast<int>(rng() % 3);
  NcPoint x;
  x.level = n;
  if (n == 1) {
    x.images = {Matrix::Zero(1, 1)};
  } else {
    Matrix a = random_signed(rng, n, -1);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    double t = u(rng);
    if (std::abs(t - 1.0) < 1e-3) t = 0.5;
    a *= t / Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
    x.images = {a};
  }
  const HullResult h = hull_membership({fx.point("ci")}, x);
  const MembershipResult m = ucp_membership(fx.system, x);
  if (h.verdict.indeterminate || m.verdict.indeterminate) return undecided("hull or membership too close to call");
  if (h.member != m.member) return fail("hull of c(i) and the state space disagree");
  return ok();
}

Outcome milman_converse_skew(Rng& rng) {
  const Fixture& fx = fixture("skew");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double ts[] = {1.0, -1.0, u(rng)};
  const double t = ts[rng() % 3];
  const Matrix o = random_orthogonal(rng, 2);
  NcPoint x;
  x.level = 2;
  x.images = {Matrix(t * o.transpose() * rotation_generator() * o)};
  const Classification c = classify(fx.system, x);
  if (c.indeterminate) return undecided("classification too close to call");
  if (!c.extreme) return ok();
  const Matrix ci = rotation_generator();
  const Intertwiner a = find_intertwiner({ci}, x.images);
  const Intertwiner b = find_intertwiner({Matrix(-ci)}, x.images);
  if (a.u.size() == 0 && b.u.size() == 0) return fail("extreme level-2 point not equivalent to +-c(i)");
  return ok();
}

// ---------------------------------------------------------------- envelope

Outcome eval_equivariance(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPolynomial f = random_polynomial(rng, fx.system.num_generators(), 3, 5);
  const NcPoint x = random_member(fx.system, rng, 3);
  const NcPoint z = random_member(fx.system, rng, 2);
  const Matrix u = random_orthogonal(rng, 3);
  const Matrix lhs = eval_poly(f, compress_point(x, Isometry{u}));
  const Matrix rhs = u.transpose() * eval_poly(f, x) * u;
  const double d1 = (lhs - rhs).norm();
  const Matrix ds = eval_poly(f, direct_sum({x, z}));
  const Matrix sep = block_diag({eval_poly(f, x), eval_poly(f, z)});
  const double d2 = (ds - sep).cwiseAbs().maxCoeff();
  if (d1 > 1e-12 * std::max(1.0, rhs.norm())) return fail("equivariance off by " + str(d1));
  if (d2 != 0.0) return fail("direct sum not respected: " + str(d2));
  return ok();
}

Outcome convexity_complexification(Rng& rng) {
  const std::vector<int> signs = {rng() % 2 ? 1 : -1, rng() % 2 ? 1 : -1};
  const OperatorSystem sys = random_system(rng, 3 + static_cast<int>(rng() % 2), signs);
  const NcPolynomial f = rng() % 2 ? random_convex_quadratic(rng, signs, 2) : random_polynomial(rng, 2, 2, 4);
  const std::uint64_t s = rng();
  const ConvexityVerdict a = is_convex_sampled(f, sys, 200, s);
  const ConvexityVerdict b = is_convex_complex_sampled(f, sys, 200, s);
  const double band = 10.0 * Tolerances{}.conv;
  if (std::abs(a.worst) < band || std::abs(b.worst) < band) {
    if (a.convex == b.convex) return ok();
    return undecided("convexity gap near the tolerance");
  }
  if (a.convex != b.convex) return fail("real and complexified convexity tests disagree");
  return ok();
}

Outcome pair_function_identity(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPolynomial f = random_polynomial(rng, fx.system.num_generators(), 2, 4);
  NcPolynomial zero;
  zero.dim = 1;
  zero.entries = {{}};
  const NcPolynomial cf = complex_pair(f, zero);
  const NcPoint x = random_member(fx.system, rng, 2);
  const Matrix fx_ = eval_poly(f, x);
  if ((eval_poly(cf, x) - block_diag({fx_, fx_})).norm() != 0.0) return fail("c(f,0)(x) != f(x) + f(x)");
  const std::uint64_t s = rng();
  const ConvexityVerdict a = is_convex_sampled(f, fx.system, 100, s);
  const ConvexityVerdict b = is_convex_sampled(cf, fx.system, 100, s);
  if (a.convex != b.convex) return fail("c(f,0) convexity differs from f");
  return ok();
}

Outcome atom_monotonicity(Rng& rng) {
  const Fixture& fx = rng() % 2 ? fixture("interval") : fixture("skew");
  const NcPolynomial f = random_polynomial(rng, 1, 2, 3);
  std::vector<NcPoint> small, big;
  for (int i = 0; i < 2; ++i) small.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2)));
  big = small;
  for (int i = 0; i < 2; ++i) big.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2)));
  const NcPoint x = random_member(fx.system, rng, 1);
  const Matrix h = Matrix::Identity(1, 1);
  const EnvelopeResult a = convex_envelope_value(fx.system, f, x, make_atom_set(fx.system, small, f), h);
  const EnvelopeResult b = convex_envelope_value(fx.system, f, x, make_atom_set(fx.system, big, f), h);
  if (b.value > a.value + 1e-6) return fail("more atoms raised the envelope: " + str(a.value) + " -> " + str(b.value));
  return ok();
}

Outcome hull_consistency(Rng& rng) {
  const Fixture& fx = fixture(rng() % 2 ? "interval" : "segment3");
  const NcPolynomial f = random_polynomial(rng, 1, 2, 3);
  std::vector<NcPoint> atoms = {fx.point("plus"), fx.point("minus")};
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  NcPoint x;
  x.level = 1;
  x.images = {Matrix::Constant(1, 1, u(rng))};
  const HullResult h = hull_membership(atoms, x);
  if (!h.member) return fail("point of [-1, 1] outside the hull of the characters");
  EnvelopeOptions opt;
  opt.append_point = false;
  const EnvelopeResult r = convex_envelope_value(fx.system, f, x, make_atom_set(fx.system, atoms, f), Matrix::Identity(1, 1), {}, opt);
  if (!std::isfinite(r.value) || r.barycenter_residual > Tolerances{}.feas) {
    return fail("barycenter residual " + str(r.barycenter_residual));
  }
  return ok();
}

Outcome barre_desk_form(Rng& rng) {
  const Fixture& fx = fixture("interval");
  const NcPolynomial f = rng() % 2 ? fx.function("neg_square") : random_polynomial(rng, 1, 3, 3);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  NcPoint x;
  x.level = 1;
  x.images = {Matrix::Constant(1, 1, u(rng))};
  const AtomSet at = make_atom_set(fx.system, {fx.point("plus"), fx.point("minus"), fx.point("zero")}, f);
  const Matrix h = Matrix::Identity(1, 1);
  const double a = convex_envelope_value(fx.system, f, x, at, h).value;
  const double b = complex_envelope_value(fx.system, f, x, at, h).value;
  if (std::abs(a - b) > 2e-6) return fail("real envelope " + str(a) + " vs complex " + str(b));
  return ok();
}

Outcome jensen_convex(Rng& rng) {
  const Fixture& fx = random_fixture(rng);
  const NcPolynomial f = random_convex_quadratic(rng, fx.system.signs(), 1);
  std::vector<NcPoint> atoms;
  for (int i = 0; i < 2; ++i) atoms.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2)));
  const NcPoint x = random_member(fx.system, rng, 1);
  const EnvelopeResult r = convex_envelope_value(fx.system, f, x, make_atom_set(fx.system, atoms, f), Matrix::Identity(1, 1));
  const double res = jensen_check(f, x, r);
  if (res > Tolerances{}.opt) return fail("Jensen residual " + str(res) + " for a convex function");
  return ok();
}

Outcome separation_by_convex(Rng& rng) {
  const Fixture& fx = rng() % 2 ? fixture("interval") : fixture("skew");
  std::vector<NcPoint> atoms;
  for (int i = 0; i < 3; ++i) atoms.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 2)));
  // x as an average of the atoms' compressions so that it lies in their hull.
  int total = 0;
  for (const auto& a : atoms) total += a.level;
  const NcPoint x = compress_point(direct_sum(atoms), Isometry{random_isometry(rng, total, 1)});
  const SeparationCheck s = separation_check(fx.system, x, atoms, rng, 12);
  if (!s.holds) {
    return fail("convex family rank " + str(s.convex_rank) + " < " + str(s.full_rank) + ", pair gap " + str(s.worst_pair_gap));
  }
  return ok();
}

Outcome grid_parallel_matches_serial(Rng& rng) {
  const Fixture& fx = fixture("skew");
  const NcPolynomial f = random_polynomial(rng, 1, 2, 3);
  const NcPoint x = random_member(fx.system, rng, 2);
  const AtomSet at = make_atom_set(fx.system, {fx.point("ci")}, f);
  const MatrixList grid = direction_grid(2);
  const auto a = envelope_over_grid(fx.system, f, x, at, grid);
  const auto b = envelope_over_grid_serial(fx.system, f, x, at, grid);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].value != b[i].value) return fail("parallel and serial grid values differ");
  }
  return ok();
}

Outcome minorant_certificates(Rng& rng) {
  const Fixture& fx = fixture("interval");
  std::vector<NcPoint> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(random_member(fx.system, rng, 1 + static_cast<int>(rng() % 3)));
  const NcPolynomial neg = fx.function("neg_square");
  const NcPoint& zero = fx.point("zero");
  const Matrix h = Matrix::Identity(1, 1);
  const AtomSet at = make_atom_set(fx.system, {fx.point("plus"), fx.point("minus"), zero}, neg);
  const double env = convex_envelope_value(fx.system, neg, zero, at, h).value;
  const MinorantVerdict v = affine_minorant_check({-1.0, 0.0}, neg, samples, zero, h, env);
  if (!v.valid || !v.weak_duality) return fail("constant -1 should be a valid minorant of -X^2");
  try {
    affine_minorant_check({0.5, 0.0}, neg, samples, zero, h, env);
    return fail("constant 1/2 accepted as a minorant of -X^2");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MinorantViolated) return fail(e.what());
  }
  return ok();
}

std::vector<PropertyCase> build_cases() {
  return {
      {"systems", "realify_homomorphism", 20, realify_homomorphism},
      {"systems", "u_compress_roundtrip", 20, u_compress_roundtrip},
      {"systems", "combination_is_compression", 20, combination_is_compression},
      {"systems", "compression_keeps_signs", 20, compression_keeps_signs},
      {"systems", "shuffle_of_real_point", 20, shuffle_of_real_point},
      {"systems", "validation_rejects", 10, validation_rejects},
      {"sdp", "skew_membership_sandwich", 30, skew_membership_sandwich},
      {"sdp", "interval_membership_sandwich", 30, interval_membership_sandwich},
      {"sdp", "dykstra_agrees", 6, dykstra_agrees},
      {"sdp", "optimum_matches_bisection", 6, optimum_matches_bisection},
      {"sdp", "combination_in_hull", 20, combination_in_hull},
      {"sdp", "probe_examples", 3, probe_examples},
      {"structure", "conjugation_invariance", 20, conjugation_invariance},
      {"structure", "fixture_types", 10, fixture_types},
      {"structure", "decomposition_complete", 10, decomposition_complete},
      {"extremal", "classification_invariants", 40, classification_invariants},
      {"extremal", "maximal_under_doubling", 40, maximal_under_doubling},
      {"extremal", "complex_maximal_routes", 30, complex_maximal_routes},
      {"extremal", "realified_extreme_descends", 20, realified_extreme_descends},
      {"extremal", "level_one_bridge", 20, level_one_bridge},
      {"extremal", "dilation_is_maximal", 20, dilation_is_maximal},
      {"extremal", "krein_milman_skew", 30, krein_milman_skew},
      {"extremal", "milman_converse_skew", 30, milman_converse_skew},
      {"envelope", "eval_equivariance", 30, eval_equivariance},
      {"envelope", "convexity_complexification", 20, convexity_complexification},
      {"envelope", "pair_function_identity", 10, pair_function_identity},
      {"envelope", "atom_monotonicity", 15, atom_monotonicity},
      {"envelope", "hull_consistency", 15, hull_consistency},
      {"envelope", "barre_desk_form", 10, barre_desk_form},
      {"envelope", "jensen_convex", 15, jensen_convex},
      {"envelope", "separation_by_convex", 10, separation_by_convex},
      {"envelope", "grid_parallel_matches_serial", 3, grid_parallel_matches_serial},
      {"envelope", "minorant_certificates", 3, minorant_certificates},
  };
}

Outcome guarded(const PropertyCase& c, std::uint64_t seed) {
  Rng rng(seed);
  try {
    return c.run(rng);
  } catch (const Error& e) {
    return fail(std::string("exception: ") + e.what());
  } catch (const std::exception& e) {
    return fail(std::string("exception: ") + e.what());
  }
}

}  // namespace

std::vector<std::string> suite_names() { return {"systems", "sdp", "structure", "extremal", "envelope"}; }

const std::vector<PropertyCase>& property_cases() {
  static const std::vector<PropertyCase> cases = build_cases();
  return cases;
}

std::uint64_t instance_seed(std::uint64_t master, const std::string& case_name, int index) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : case_name) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32), static_cast<std::uint32_t>(index)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

VerifyReport run_suite(const std::string& suite, std::uint64_t seed, bool parallel) {
  const auto start = std::chrono::steady_clock::now();
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorKind::ParseError, "unknown suite '" + suite + "'");
  }
  struct Job {
    const PropertyCase* c;
    int index;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& c : property_cases()) {
    if (suite != "all" && c.suite != suite) continue;
    for (int i = 0; i < c.instances; ++i) jobs.push_back({&c, i, instance_seed(seed, c.name, i)});
  }
  std::vector<Outcome> results(jobs.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(jobs.size()); ++i) results[i] = guarded(*jobs[i].c, jobs[i].seed);
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = guarded(*jobs[i].c, jobs[i].seed);
  }
  VerifyReport rep;
  rep.suite = suite;
  rep.cases = static_cast<int>(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!results[i].pass) {
      rep.failures.push_back({jobs[i].c->name, jobs[i].seed, results[i].message});
    } else {
      ++rep.passed;
      if (results[i].indeterminate) ++rep.indeterminate;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

CaseOutcome run_case(const std::string& case_name, std::uint64_t seed) {
  for (const auto& c : property_cases()) {
    if (c.name == case_name) return guarded(c, seed);
  }
  throw Error(ErrorKind::ParseError, "unknown case '" + case_name + "'");
}

}  // namespace realnc
