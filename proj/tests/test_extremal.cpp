#include "realnc/extremal.hpp"
#include "realnc/fixtures.hpp"
#include "realnc/sampling.hpp"

#include "doctest.h"

using namespace realnc;

TEST_CASE("interval characters and their midpoint") {
  const Fixture fx = load_fixture("interval");
  const SystemContext ctx = make_context(fx.system);
  const Classification plus = classify(ctx, fx.point("plus"));
  CHECK(plus.extreme);
  CHECK(plus.extreme_in_complexification);
  const Classification zero = classify(ctx, fx.point("zero"));
  CHECK_FALSE(zero.pure);
  CHECK_FALSE(zero.maximal);
  CHECK_FALSE(zero.indeterminate);
}

TEST_CASE("non-members classify as nothing") {
  const Fixture fx = load_fixture("interval");
  NcPoint x;
  x.images = {Matrix::Constant(1, 1, 2.0)};
  const Classification c = classify(fx.system, x);
  CHECK_FALSE(c.member);
  CHECK_FALSE(c.extreme);
}

TEST_CASE("reducible points are never pure") {
  const Fixture fx = load_fixture("skew");
  const NcPoint two = direct_sum({fx.point("ci"), fx.point("ci")});
  const PurityCertificate p = is_pure(fx.system, two);
  CHECK_FALSE(p.value);
  CHECK(p.reducible_shortcut);
  CHECK(is_maximal(fx.system, two).value);
}

TEST_CASE("maximality certificates carry witnesses") {
  const Fixture fx = load_fixture("quaternion");
  const MaximalityCertificate m = is_maximal(fx.system, fx.point("re_compression"));
  CHECK_FALSE(m.value);
  CHECK(m.mult_residual > 1e-3);
  CHECK_FALSE(m.witness.empty());
}

TEST_CASE("complex maximality by both routes") {
  const Fixture fx = load_fixture("skew");
  const SystemContext ctx = make_context(fx.system);
  ComplexNcPoint z;
  z.level = 2;
  z.real_part = {rotation_generator()};
  z.imag_part = {Matrix::Zero(2, 2)};
  CHECK(complex_maximal(ctx, z).value);
  CHECK(complex_maximal_doubled(fx.system, z).value);
  z.level = 1;
  z.real_part = {Matrix::Zero(1, 1)};
  z.imag_part = {Matrix::Zero(1, 1)};
  CHECK_FALSE(complex_maximal(ctx, z).value);
  CHECK_FALSE(complex_maximal_doubled(fx.system, z).value);
}

TEST_CASE("maximal dilations compress back and respect the level cap") {
  const Fixture fx = load_fixture("interval");
  SystemContext ctx = make_context(fx.system);
  const DilationResult d = maximal_dilation(ctx, fx.point("zero"));
  CHECK(d.dilated.level == 2);
  CHECK(d.minimality);
  CHECK(d.compression_residual < 1e-10);
  CHECK(d.maximal_certificate.maximal);

  const DilationResult same = maximal_dilation(ctx, fx.point("plus"));
  CHECK(same.dilated.level == 1);

  Tolerances tol;
  tol.max_level = 1;
  SystemContext capped = make_context(fx.system, tol);
  CHECK_THROWS_AS(maximal_dilation(capped, fx.point("zero")), Error);
}

TEST_CASE("envelope embedding drops the interior character of segment3") {
  const Fixture fx = load_fixture("segment3");
  SystemContext ctx = make_context(fx.system);
  ensure_structure(ctx);
  CHECK(ctx.decomposition->classes.size() == 3);
  CHECK(ctx.embedding->classes.size() == 2);
  CHECK_FALSE(ctx.embedding->identity);
  const EnvelopeReport r = shilov_and_envelope(ctx);
  CHECK(r.cross_check_ok);
  CHECK(r.shilov_ideal_blocks.size() == 1);
}

TEST_CASE("block multisets") {
  const std::vector<EnvelopeClass> cs = {{2, CommutantKind::C, true}, {1, CommutantKind::R, false}};
  CHECK(block_multiset(cs, true).size() == 1);
  CHECK(block_multiset(cs, false).size() == 2);
}
