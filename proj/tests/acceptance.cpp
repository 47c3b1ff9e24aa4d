// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion; exit status 1 if any fails.
#include "realnc/envelope.hpp"
#include "realnc/extremal.hpp"
#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"
#include "realnc/sdp.hpp"
#include "realnc/structure.hpp"
#include "realnc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace realnc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double spectral_norm(const Matrix& a) { return a.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(a).singularValues()(0); }

Outcome criterion1() {
  const Fixture fx = load_fixture("skew");
  const Classification c = classify(fx.system, fx.point("zero"));
  std::ostringstream d;
  d << "pure=" << c.pure << " (margin " << c.pure_verdict.margin << ") maximal=" << c.maximal << " (margin "
    << c.maximal_verdict.margin << ") extreme=" << c.extreme;
  const bool ok = c.member && c.pure && !c.maximal && !c.extreme && c.pure_verdict.margin >= 10.0 &&
                  c.maximal_verdict.margin >= 10.0 && !c.indeterminate;
  return {ok, d.str()};
}

Outcome criterion2() {
  const Fixture fx = load_fixture("skew");
  const Classification c = classify(fx.system, fx.point("ci"));
  std::ostringstream d;
  d << "irrR=" << c.irreducible_real << " irrC=" << c.irreducible_complex << " pure=" << c.pure
    << " maximal=" << c.maximal << " extreme=" << c.extreme << " extreme_c=" << c.extreme_in_complexification;
  const bool ok = c.irreducible_real && !c.irreducible_complex && c.pure && c.maximal && c.extreme &&
                  !c.extreme_in_complexification && !c.indeterminate;
  return {ok, d.str()};
}

Outcome criterion3() {
  const Fixture fx = load_fixture("quaternion");
  SystemContext ctx = make_context(fx.system);
  const NcPoint& x = fx.point("re_compression");
  const Classification c = classify(ctx, x);
  const DilationResult dil = maximal_dilation(ctx, x);
  const Intertwiner t = find_intertwiner(fx.point("identity").images, dil.dilated.images);
  std::ostringstream d;
  d << "pure=" << c.pure << " maximal=" << c.maximal << " dilated level " << dil.dilated.level
    << " intertwiner residual " << (t.u.size() ? t.residual : -1.0) << " compression residual " << dil.compression_residual;
  const bool ok = c.pure && !c.maximal && !c.indeterminate && dil.dilated.level == 4 && t.u.size() > 0 &&
                  t.residual <= 1e-6 && dil.maximal_certificate.extreme;
  return {ok, d.str()};
}

// Random level-n matrix: mostly skew with spectral norm spread over [0, 2], some with a symmetric part.
NcPoint hull_probe(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Matrix a;
  if (n == 1 || rng() % 5 == 0) {
    a = random_gaussian(rng, n, n);
    if (rng() % 2) a = Matrix(a - a.transpose()) + 1e-3 * Matrix::Identity(n, n);
  } else {
    a = random_signed(rng, n, -1);
  }
  const double s = spectral_norm(a);
  if (s > 0.0) a *= u(rng) / s;
  if (n == 1 && rng() % 4 == 0) a.setZero();
  NcPoint x;
  x.level = n;
  x.images = {a};
  return x;
}

Outcome criterion4() {
  const Fixture fx = load_fixture("skew");
  const NcPoint ci = fx.point("ci");
  constexpr int kPerLevel = 500;
  std::ostringstream d;
  bool ok = true;
  for (int n = 1; n <= 3; ++n) {
    std::vector<NcPoint> pts;
    Rng rng(1000 + n);
    while (static_cast<int>(pts.size()) < kPerLevel) {
      NcPoint x = hull_probe(rng, n);
      const Matrix& a = x.images[0];
      const bool skew = (a + a.transpose()).norm() == 0.0;
      if (skew && std::abs(spectral_norm(a) - 1.0) < 1e-5) continue;
      pts.push_back(std::move(x));
    }
    std::vector<int> verdict(pts.size());
    std::vector<int> expected(pts.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < kPerLevel; ++i) {
      const Matrix& a = pts[i].images[0];
      expected[i] = (a + a.transpose()).norm() == 0.0 && spectral_norm(a) <= 1.0;
      try {
        verdict[i] = hull_membership({ci}, pts[i]).member ? 1 : 0;
      } catch (const Error&) {
        verdict[i] = -1;
      }
    }
    int members = 0, disagree = 0, errors = 0;
    for (int i = 0; i < kPerLevel; ++i) {
      members += expected[i];
      if (verdict[i] < 0) ++errors;
      else if (verdict[i] != expected[i]) ++disagree;
    }
    d << "level " << n << ": " << kPerLevel << " points, " << members << " members, " << disagree << " disagreements, "
      << errors << " errors; ";
    ok = ok && disagree == 0 && errors == 0;
  }
  return {ok, d.str()};
}

NcPoint random_fixture_member(Rng& rng, const Fixture& fx) {
  const int kind = static_cast<int>(rng() % 3);
  if (kind == 0) {
    const NcPoint& p = fx.points[rng() % fx.points.size()].point;
    return compress_point(p, make_isometry(random_orthogonal(rng, p.level)));
  }
  if (kind == 1) {
    std::uniform_int_distribution<int> lev(1, 3);
    return random_member(fx.system, rng, lev(rng));
  }
  const NcPoint& a = fx.points[rng() % fx.points.size()].point;
  const NcPoint& b = fx.points[rng() % fx.points.size()].point;
  const NcPoint s = direct_sum({a, b});
  if (s.level > 4) return a;
  return compress_point(s, make_isometry(random_orthogonal(rng, s.level)));
}

Outcome criterion5() {
  constexpr int kMembers = 240;
  std::vector<std::string> names = fixture_names();
  std::vector<Fixture> fixtures;
  std::vector<SystemContext> ctxs;
  for (const auto& n : names) {
    fixtures.push_back(load_fixture(n));
    ctxs.push_back(make_context(fixtures.back().system));
    ensure_structure(ctxs.back());
  }
  std::vector<NcPoint> pts;
  std::vector<int> which;
  Rng rng(2024);
  while (static_cast<int>(pts.size()) < kMembers) {
    const int f = static_cast<int>(rng() % fixtures.size());
    pts.push_back(random_fixture_member(rng, fixtures[f]));
    which.push_back(f);
  }
  struct Row {
    int single = -1, doubled = -1, complexified = -1;
    bool indeterminate = false;
    std::string error;
  };
  std::vector<Row> rows(pts.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < kMembers; ++i) {
    try {
      const SystemContext& ctx = ctxs[which[i]];
      const MaximalityCertificate a = is_maximal(ctx, pts[i]);
      const MaximalityCertificate b = is_maximal(ctx, direct_sum({pts[i], pts[i]}));
      ComplexNcPoint z;
      z.level = pts[i].level;
      z.real_part = pts[i].images;
      for (const auto& m : pts[i].images) z.imag_part.push_back(Matrix::Zero(m.rows(), m.cols()));
      const MaximalityCertificate c = complex_maximal(ctx, z);
      rows[i] = {a.value, b.value, c.value, a.verdict.indeterminate || b.verdict.indeterminate || c.verdict.indeterminate, {}};
    } catch (const Error& e) {
      rows[i].error = e.what();
    }
  }
  int maximal = 0, disagree = 0, indet = 0, errors = 0;
  std::string first_error;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++errors;
      if (first_error.empty()) first_error = r.error;
      continue;
    }
    if (r.indeterminate) {
      ++indet;
      continue;
    }
    maximal += r.single;
    if (r.single != r.doubled || r.single != r.complexified) ++disagree;
  }
  std::ostringstream d;
  d << kMembers << " members (" << maximal << " maximal), " << disagree << " disagreements, " << indet
    << " indeterminate, " << errors << " errors" << (first_error.empty() ? "" : " [" + first_error + "]");
  return {disagree == 0 && errors == 0 && maximal > 0 && maximal < kMembers - indet, d.str()};
}

Outcome criterion6() {
  struct Expect {
    const char* fixture;
    std::vector<std::pair<int, CommutantKind>> blocks;
  };
  const std::vector<Expect> cases = {{"skew", {{2, CommutantKind::C}}},
                                     {"interval", {{1, CommutantKind::R}, {1, CommutantKind::R}}},
                                     {"quaternion", {{4, CommutantKind::H}}}};
  std::ostringstream d;
  bool ok = true;
  for (const auto& c : cases) {
    const EnvelopeReport r = shilov_and_envelope(load_fixture(c.fixture).system);
    auto want = c.blocks;
    std::sort(want.begin(), want.end());
    const auto shilov = block_multiset(r.blocks, true);
    const auto dil = block_multiset(r.dilation_route, false);
    const bool good = shilov == want && dil == want && r.cross_check_ok;
    d << c.fixture << ":";
    for (const auto& [size, type] : shilov) d << " {" << size << "," << to_string(type) << "}";
    d << (good ? " ok; " : " MISMATCH; ");
    ok = ok && good;
  }
  return {ok, d.str()};
}

Outcome criterion7() {
  const Fixture fx = load_fixture("interval");
  const Matrix h = Matrix::Identity(1, 1);
  const std::vector<NcPoint> atoms = {fx.point("plus"), fx.point("minus"), fx.point("zero")};
  const NcPoint& x = fx.point("zero");
  const NcPolynomial& neg = fx.function("neg_square");
  const NcPolynomial& sq = fx.function("square");
  const EnvelopeResult a = convex_envelope_value(fx.system, neg, x, make_atom_set(fx.system, atoms, neg), h);
  const EnvelopeResult b = convex_envelope_value(fx.system, sq, x, make_atom_set(fx.system, atoms, sq), h);
  const double jr = jensen_check(sq, x, b);
  std::ostringstream d;
  d << "-X^2 -> " << a.value << ", X^2 -> " << b.value << " (Jensen residual " << jr << ")";
  const bool ok = std::abs(a.value + 1.0) <= 1e-5 && std::abs(b.value) <= 1e-5 && jr <= 1e-6;
  return {ok, d.str()};
}

Outcome criterion8() {
  constexpr int kPolys = 60;
  const double band = 10.0 * Tolerances{}.conv;
  struct Row {
    bool real = false, complex = false, near = false;
    std::string error;
  };
  std::vector<Row> rows(kPolys);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < kPolys; ++i) {
    Rng rng(0x8000u + static_cast<unsigned>(i));
    try {
      const std::vector<int> signs = {rng() % 2 ? 1 : -1, rng() % 2 ? 1 : -1};
      const OperatorSystem sys = random_system(rng, 3 + static_cast<int>(rng() % 2), signs);
      const NcPolynomial f = i % 2 ? random_convex_quadratic(rng, signs, 2) : random_polynomial(rng, 2, 3, 5);
      const std::uint64_t seed = rng();
      const ConvexityVerdict a = is_convex_sampled(f, sys, 200, seed);
      const ConvexityVerdict b = is_convex_complex_sampled(f, sys, 200, seed);
      rows[i] = {a.convex, b.convex, std::abs(a.worst) < band || std::abs(b.worst) < band, {}};
    } catch (const Error& e) {
      rows[i].error = e.what();
    }
  }
  int convex = 0, disagree = 0, near = 0, errors = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++errors;
      continue;
    }
    convex += r.real;
    if (r.real != r.complex) {
      if (r.near) ++near;
      else ++disagree;
    }
  }

  // Real envelope at x + i0 equals the complex envelope.
  const Fixture fx = load_fixture("interval");
  const std::vector<NcPoint> atoms = {fx.point("plus"), fx.point("minus"), fx.point("zero")};
  double worst = 0.0;
  Rng rng(88);
  for (int k = 0; k < 12; ++k) {
    const NcPolynomial f = k < 2 ? fx.function(k == 0 ? "neg_square" : "square") : random_polynomial(rng, 1, 3, 4);
    const NcPoint x = random_member(fx.system, rng, 1 + k % 2);
    const AtomSet at = make_atom_set(fx.system, atoms, f);
    for (const auto& h : direction_grid(x.level)) {
      const double re = convex_envelope_value(fx.system, f, x, at, h).value;
      const double im = complex_envelope_value(fx.system, f, x, at, h).value;
      worst = std::max(worst, std::abs(re - im));
    }
  }
  std::ostringstream d;
  d << kPolys << " polynomials (" << convex << " convex), " << disagree << " disagreements, " << near
    << " within the tolerance band, " << errors << " errors; barre gap " << worst;
  return {disagree == 0 && errors == 0 && convex > 0 && convex < kPolys && worst <= 2e-6, d.str()};
}

Outcome criterion9() {
  const Fixture fx = load_fixture("skew");
  const SystemContext ctx = make_context(fx.system);
  const Matrix ci = rotation_generator();
  struct Tally {
    int sampled = 0, extreme = 0, bad = 0, indet = 0, errors = 0;
  };
  auto search = [&](int level, int count, std::uint64_t seed) {
    std::vector<NcPoint> pts;
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < count; ++i) {
      if (level == 2 && i % 4 == 0) {
        // Boundary of the level-2 ball: +-O^T c(i) O.
        const Matrix o = random_orthogonal(rng, 2);
        NcPoint x;
        x.level = 2;
        x.images = {Matrix((i % 8 == 0 ? 1.0 : -1.0) * o.transpose() * ci * o)};
        pts.push_back(x);
      } else if (i % 2 == 0) {
        Matrix a = random_signed(rng, level, -1);
        const double s = spectral_norm(a);
        if (s > 0.0) a *= std::abs(u(rng)) / s;
        NcPoint x;
        x.level = level;
        x.images = {a};
        pts.push_back(x);
      } else {
        pts.push_back(random_member(fx.system, rng, level));
      }
    }
    std::vector<int> res(pts.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
      try {
        const Classification c = classify(ctx, pts[i]);
        if (c.indeterminate) {
          res[i] = 3;
        } else if (!c.extreme) {
          res[i] = 0;
        } else {
          const bool eq = find_intertwiner({ci}, pts[i].images).u.size() > 0 ||
                          find_intertwiner({Matrix(-ci)}, pts[i].images).u.size() > 0;
          res[i] = eq ? 1 : 2;
        }
      } catch (const Error&) {
        res[i] = 4;
      }
    }
    Tally t;
    t.sampled = count;
    for (int r : res) {
      t.extreme += r == 1 || r == 2;
      t.bad += r == 2;
      t.indet += r == 3;
      t.errors += r == 4;
    }
    return t;
  };
  const Tally l1 = search(1, 50, 91);
  const Tally l2 = search(2, 400, 92);
  const Tally l4 = search(4, 60, 94);
  std::ostringstream d;
  d << "level 1: " << l1.extreme << "/" << l1.sampled << " extreme; level 2: " << l2.extreme << "/" << l2.sampled
    << " extreme, " << l2.bad << " not equivalent to +-c(i), " << l2.indet << " indeterminate; level 4: " << l4.extreme
    << "/" << l4.sampled << " extreme; errors " << l1.errors + l2.errors + l4.errors;
  const bool ok = l1.extreme == 0 && l4.extreme == 0 && l2.extreme > 0 && l2.bad == 0 &&
                  l1.errors + l2.errors + l4.errors == 0;
  return {ok, d.str()};
}

Outcome criterion10() {
  const VerifyReport r = run_suite("all", 42, true);
  std::ostringstream d;
  d << r.passed << "/" << r.cases << " passed, " << r.indeterminate << " indeterminate, " << r.failures.size()
    << " failures";
  for (const auto& f : r.failures) d << " [" << f.case_name << " seed " << f.seed << ": " << f.message << "]";
  const bool ok = r.failures.empty() && r.cases > 0 && r.indeterminate * 100 <= r.cases;
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"skew fixture, 0 at level 1: pure, not maximal, not extreme", criterion1},
      {"skew fixture, c(i): real-irreducible extreme point, not extreme after complexification", criterion2},
      {"quaternion Re-compression: pure, not maximal, dilates to the 4-dim representation", criterion3},
      {"hull of c(i) = skew matrices of norm <= 1 at levels 1-3", criterion4},
      {"maximality invariant under x -> x + x and under complexification", criterion5},
      {"C*-envelopes by the Shilov route and the dilation route", criterion6},
      {"envelope values of -X^2 and X^2 on the interval", criterion7},
      {"convexity complexification and real = complex envelope", criterion8},
      {"extreme-point inventory of the skew fixture at levels 1, 2, 4", criterion9},
      {"property suites, seed 42", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu: %s -- %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
