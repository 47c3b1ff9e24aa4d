#include "realnc/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace realnc {

namespace {

MatrixList images_or_zero(const NcPoint& x) {
  if (!x.images.empty()) return x.images;
  return {Matrix::Zero(x.level, x.level)};
}

FaceResult extension_face(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol) {
  return minimal_face(extension_problem(sys, x), tol);
}

MatrixList sym_basis(int r) {
  MatrixList out;
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      Matrix e = Matrix::Zero(r, r);
      if (i == j) {
        e(i, i) = 1.0;
      } else {
        e(i, j) = e(j, i) = std::sqrt(0.5);
      }
      out.push_back(e);
    }
  }
  return out;
}

// Values of phi on the algebra basis when V is the whole generated algebra.
MatrixList values_on_algebra(const SystemContext& ctx, const NcPoint& x) {
  MatrixList vals;
  const int n = x.level;
  for (Index k = 0; k < ctx.v_coords.cols(); ++k) {
    Matrix v = ctx.v_coords(0, k) * Matrix::Identity(n, n);
    for (int j = 0; j < ctx.system.num_generators(); ++j) v += ctx.v_coords(j + 1, k) * x.images[j];
    vals.push_back(v);
  }
  return vals;
}

double multiplicativity_residual(const MatrixList& basis, const MatrixList& vals) {
  double worst = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t l = 0; l < basis.size(); ++l) {
      const Vector c = coordinates(basis, basis[k] * basis[l]);
      Matrix img = Matrix::Zero(vals[0].rows(), vals[0].cols());
      for (Index p = 0; p < c.size(); ++p) img += c(p) * vals[p];
      worst = std::max(worst, (img - vals[k] * vals[l]).norm());
    }
  }
  return worst;
}

MaximalityCertificate maximal_impl(const SystemContext& ctx, const NcPoint& x, const FaceResult& face) {
  MaximalityCertificate out;
  out.member = face.feasible;
  if (!face.feasible) {
    out.verdict = Verdict::exact(false);
    return out;
  }
  const MatrixList& basis = ctx.algebra.basis;
  if (ctx.v_is_algebra) {
    out.unique = true;
    out.witness = values_on_algebra(ctx, x);
  } else {
    ExtensionProbe probe = extension_set_probe(ctx.system, x, basis, ctx.tol, &face);
    out.unique = probe.unique;
    out.spread = probe.spread;
    out.witness = probe.witness;
    out.second_witness = probe.second_witness;
    if (!probe.unique) {
      out.value = false;
      out.verdict = probe.verdict;
      return out;
    }
    if (probe.verdict.indeterminate) {
      // Uniqueness too close to call makes the whole verdict so.
      out.mult_residual = multiplicativity_residual(basis, out.witness);
      out.verdict = Verdict::below(out.mult_residual, ctx.tol.mult);
      out.verdict.indeterminate = true;
      out.value = out.verdict.value;
      return out;
    }
  }
  out.mult_residual = multiplicativity_residual(basis, out.witness);
  out.verdict = Verdict::below(out.mult_residual, ctx.tol.mult);
  out.value = out.verdict.value;
  return out;
}

// Minimal Stinespring space of the extension with the given Choi matrix, restricted to C*(G).
MatrixList stinespring_images(const OperatorSystem& sys, const Matrix& choi, int n, Matrix* stacked = nullptr,
                              Matrix* cyclic = nullptr) {
  const int m = sys.ambient_dim;
  const KrausForm kf = kraus_factor(choi, m, n, 1e-12);
  const Matrix eye_r = Matrix::Identity(kf.rank, kf.rank);
  MatrixList ops, amplified;
  for (const auto& g : sys.generators) {
    Matrix big = Matrix::Zero(static_cast<Index>(kf.rank) * m, static_cast<Index>(kf.rank) * m);
    for (int r = 0; r < kf.rank; ++r) big.block(r * m, r * m, m, m) = g.matrix;
    amplified.push_back(big);
    ops.push_back(big);
    ops.push_back(big.transpose());
  }
  const Matrix q = ops.empty() ? orthonormal_range(kf.stacked, 1e-9) : cyclic_subspace(ops, kf.stacked, 1e-9);
  if (stacked) *stacked = kf.stacked;
  if (cyclic) *cyclic = q;
  return restrict_images(amplified, q);
}

PurityCertificate pure_impl(const SystemContext& ctx, const NcPoint& x, const FaceResult& face,
                            const CommutantType& ct) {
  PurityCertificate out;
  out.member = face.feasible;
  if (!face.feasible) {
    out.verdict = Verdict::exact(false);
    return out;
  }
  const OperatorSystem& sys = ctx.system;
  const int n = x.level;
  if (ct.kind == CommutantKind::Reducible) {
    out.reducible_shortcut = true;
    out.verdict = Verdict::exact(false);
    out.value = false;
    return out;
  }
  const Matrix& v = face.basis[0];
  const int r = static_cast<int>(v.cols());
  out.face_rank = r;
  const MatrixList vb = sys.basis();
  const Index rows = static_cast<Index>(vb.size()) * n * n;

  Vector phi(rows);
  phi.segment(0, n * n) = Matrix::Identity(n, n).reshaped();
  for (int j = 0; j < sys.num_generators(); ++j) phi.segment((j + 1) * n * n, n * n) = x.images[j].reshaped();

  const MatrixList sb = sym_basis(r);
  Matrix lmap(rows, static_cast<Index>(sb.size()));
  for (std::size_t c = 0; c < sb.size(); ++c) {
    const Matrix lifted = v * sb[c] * v.transpose();
    for (std::size_t k = 0; k < vb.size(); ++k) {
      lmap.col(static_cast<Index>(c)).segment(static_cast<Index>(k) * n * n, n * n) =
          choi_apply(lifted, vb[k], n).reshaped();
    }
  }
  const Vector u = phi.normalized();
  const Matrix off = lmap - u * (u.transpose() * lmap);
  const double lnorm = CheckedSvd(lmap).singularValues()(0);
  const double onorm = off.size() > 0 ? CheckedSvd(off).singularValues()(0) : 0.0;
  out.measure = lnorm > 0.0 ? onorm / lnorm : 0.0;
  out.verdict = Verdict::below(out.measure, ctx.tol.pure);
  out.value = out.verdict.value;

  if (ctx.v_is_algebra) {
    // Compression of an irreducible representation exactly when pure.
    const MatrixList imgs = stinespring_images(sys, face.interior[0], n);
    out.stinespring_checked = true;
    if (imgs.empty() || imgs[0].rows() <= 1) {
      out.stinespring_value = true;
    } else {
      out.stinespring_value = commutant_type(imgs, ctx.tol).kind != CommutantKind::Reducible;
    }
    if (!out.verdict.indeterminate && out.stinespring_value != out.value) {
      std::ostringstream msg;
      msg << "purity routes disagree: order interval measure " << out.measure << " vs Stinespring "
          << (out.stinespring_value ? "irreducible" : "reducible");
      throw Error(ErrorKind::CrossCheckMismatch, msg.str());
    }
  }
  return out;
}

}  // namespace

SystemContext make_context(const OperatorSystem& sys, const Tolerances& tol, std::uint64_t seed) {
  SystemContext ctx;
  ctx.system = sys;
  ctx.tol = tol;
  ctx.seed = seed;
  ctx.algebra = generate_algebra(sys, tol);
  const MatrixList vb = sys.basis();
  const int m = sys.ambient_dim;
  ctx.v_is_algebra = ctx.algebra.basis.size() == vb.size();
  Matrix vmat(static_cast<Index>(m) * m, static_cast<Index>(vb.size()));
  for (std::size_t k = 0; k < vb.size(); ++k) vmat.col(static_cast<Index>(k)) = vb[k].reshaped();
  if (ctx.v_is_algebra) {
    Matrix bmat(static_cast<Index>(m) * m, static_cast<Index>(ctx.algebra.basis.size()));
    for (std::size_t k = 0; k < ctx.algebra.basis.size(); ++k) bmat.col(static_cast<Index>(k)) = ctx.algebra.basis[k].reshaped();
    ctx.v_coords = vmat.colPivHouseholderQr().solve(bmat);
  }
  return ctx;
}

void ensure_structure(SystemContext& ctx) {
  if (!ctx.decomposition) {
    std::mt19937_64 rng(ctx.seed);
    ctx.decomposition = std::make_shared<const AlgebraDecomposition>(decompose_algebra(ctx.algebra, rng, ctx.tol));
  }
  if (!ctx.embedding) {
    ctx.embedding = std::make_shared<const EnvelopeEmbedding>(envelope_embedding(ctx.system, *ctx.decomposition, ctx.tol));
  }
}

MaximalityCertificate is_maximal(const SystemContext& ctx, const NcPoint& x) {
  return maximal_impl(ctx, x, extension_face(ctx.system, x, ctx.tol));
}

MaximalityCertificate is_maximal(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol) {
  return is_maximal(make_context(sys, tol), x);
}

PurityCertificate is_pure(const SystemContext& ctx, const NcPoint& x) {
  const FaceResult face = extension_face(ctx.system, x, ctx.tol);
  if (!face.feasible) return pure_impl(ctx, x, face, {});
  return pure_impl(ctx, x, face, commutant_type(images_or_zero(x), ctx.tol));
}

PurityCertificate is_pure(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol) {
  return is_pure(make_context(sys, tol), x);
}

Classification classify(const SystemContext& ctx, const NcPoint& x) {
  Classification c;
  const FaceResult face = extension_face(ctx.system, x, ctx.tol);
  c.member = face.feasible;
  c.member_verdict = face.first.verdict;
  c.indeterminate = c.member_verdict.indeterminate;
  if (!c.member) return c;

  const CommutantType ct = commutant_type(images_or_zero(x), ctx.tol);
  c.commutant = ct.kind;
  c.irreducible_real = ct.kind != CommutantKind::Reducible;
  c.irreducible_complex = ct.kind == CommutantKind::R;

  const PurityCertificate pc = pure_impl(ctx, x, face, ct);
  const MaximalityCertificate mc = maximal_impl(ctx, x, face);
  c.pure = pc.value;
  c.pure_verdict = pc.verdict;
  c.maximal = mc.value;
  c.maximal_verdict = mc.verdict;
  c.extreme = c.pure && c.maximal;
  c.extreme_in_complexification = c.extreme && c.irreducible_complex;
  c.indeterminate = c.indeterminate || pc.verdict.indeterminate || mc.verdict.indeterminate;
  return c;
}

Classification classify(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol) {
  return classify(make_context(sys, tol), x);
}

MaximalityCertificate complex_maximal(const SystemContext& ctx, const ComplexNcPoint& z) {
  return is_maximal(ctx, realify_point(z));
}

MaximalityCertificate complex_maximal_doubled(const OperatorSystem& sys, const ComplexNcPoint& z,
                                              const Tolerances& tol) {
  const OperatorSystem dsys = doubled_system(sys, tol);
  return is_maximal(dsys, doubled_point(z), tol);
}

EnvelopeEmbedding envelope_embedding(const OperatorSystem& sys, const AlgebraDecomposition& dec,
                                     const Tolerances& tol) {
  const int ncls = static_cast<int>(dec.classes.size());
  std::vector<int> kept(ncls);
  for (int c = 0; c < ncls; ++c) kept[c] = c;

  const MatrixList gens = [&] {
    MatrixList g;
    for (const auto& gen : sys.generators) g.push_back(gen.matrix);
    return g;
  }();
  auto build = [&](const std::vector<int>& classes) {
    std::vector<Generator> raw(sys.generators.size());
    int p = 0;
    for (int c : classes) p += dec.classes[c].block_size;
    for (std::size_t j = 0; j < raw.size(); ++j) {
      MatrixList parts;
      for (int c : classes) {
        const Matrix& iso = dec.blocks[dec.classes[c].members[0]].isometry;
        parts.push_back(iso.transpose() * gens[j] * iso);
      }
      raw[j].matrix = block_diag(parts);
      raw[j].sign = sys.generators[j].sign;
    }
    return validate_system(p, std::move(raw), tol, sys.label);
  };

  const NcPoint target = identity_point(sys);
  for (int c = 0; c < ncls && kept.size() > 1; ++c) {
    std::vector<int> trial;
    for (int k : kept) {
      if (k != c) trial.push_back(k);
    }
    OperatorSystem reduced;
    try {
      reduced = build(trial);
    } catch (const Error&) {
      continue;  // V is not faithfully represented without this class
    }
    const MembershipResult mr = ucp_membership(reduced, target, tol);
    if (mr.member) kept = trial;
  }

  EnvelopeEmbedding out;
  out.classes = kept;
  out.identity = static_cast<int>(kept.size()) == ncls;
  out.system = out.identity ? sys : build(kept);
  return out;
}

DilationResult maximal_dilation(SystemContext& ctx, const NcPoint& x, bool minimal, bool certify) {
  ensure_structure(ctx);
  const EnvelopeEmbedding& emb = *ctx.embedding;
  const OperatorSystem& esys = emb.system;
  const int n = x.level;
  const int p = esys.ambient_dim;

  const FaceResult face = extension_face(esys, x, ctx.tol);
  if (!face.feasible) throw Error(ErrorKind::Infeasible, "point is not a member of the state space");

  const KrausForm kf = kraus_factor(face.interior[0], p, n, 1e-12);
  MatrixList amplified, ops;
  for (const auto& g : esys.generators) {
    Matrix big = Matrix::Zero(static_cast<Index>(kf.rank) * p, static_cast<Index>(kf.rank) * p);
    for (int r = 0; r < kf.rank; ++r) big.block(r * p, r * p, p, p) = g.matrix;
    ops.push_back(big);
    ops.push_back(big.transpose());
    amplified.push_back(std::move(big));
  }

  DilationResult out;
  out.kraus_rank = kf.rank;
  out.minimality = minimal;
  Matrix q;
  if (minimal) {
    q = ops.empty() ? orthonormal_range(kf.stacked, 1e-9) : cyclic_subspace(ops, kf.stacked, 1e-9);
  } else {
    q = Matrix::Identity(kf.stacked.rows(), kf.stacked.rows());
  }
  const Matrix alpha = q.transpose() * kf.stacked;
  if (minimal && q.cols() == n) {
    out.dilated = x;
    out.isometry = make_isometry(Matrix::Identity(n, n));
  } else {
    if (q.cols() > ctx.tol.max_level) {
      throw Error(ErrorKind::DimensionMismatch, "dilation level " + std::to_string(q.cols()) + " exceeds max level " +
                                                    std::to_string(ctx.tol.max_level));
    }
    out.dilated.level = static_cast<int>(q.cols());
    out.dilated.images = restrict_images(amplified, q);
    for (std::size_t j = 0; j < out.dilated.images.size(); ++j) {
      out.dilated.images[j] = ctx.system.generators[j].sign > 0 ? sym(out.dilated.images[j]) : skew(out.dilated.images[j]);
    }
    out.isometry = make_isometry(alpha, Tolerances{.structural = 1e-6});
  }
  const NcPoint back = compress_point(out.dilated, out.isometry);
  for (std::size_t j = 0; j < back.images.size(); ++j) {
    out.compression_residual = std::max(out.compression_residual, (back.images[j] - x.images[j]).norm());
  }
  if (certify) out.maximal_certificate = classify(ctx, out.dilated);
  return out;
}

DilationResult maximal_dilation(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol) {
  SystemContext ctx = make_context(sys, tol);
  return maximal_dilation(ctx, x);
}

std::vector<BoundaryBlock> boundary_representations(SystemContext& ctx) {
  ensure_structure(ctx);
  const AlgebraDecomposition& dec = *ctx.decomposition;
  MatrixList gens;
  for (const auto& g : ctx.system.generators) gens.push_back(g.matrix);
  std::vector<BoundaryBlock> out(dec.blocks.size());
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    const IrrepClass& cls = dec.classes[c];
    const Matrix& iso = dec.blocks[cls.members[0]].isometry;
    NcPoint pt;
    pt.level = cls.block_size;
    pt.images = restrict_images(gens, iso);
    const MaximalityCertificate mc = is_maximal(ctx, pt);
    for (int b : cls.members) {
      BoundaryBlock& bb = out[b];
      bb.block = b;
      bb.cls = static_cast<int>(c);
      bb.block_size = cls.block_size;
      bb.division_type = cls.division_type;
      bb.boundary = mc.value;
      bb.verdict = mc.verdict;
    }
  }
  return out;
}

std::vector<std::pair<int, CommutantKind>> block_multiset(const std::vector<EnvelopeClass>& classes,
                                                          bool boundary_only) {
  std::vector<std::pair<int, CommutantKind>> out;
  for (const auto& c : classes) {
    if (!boundary_only || c.boundary) out.emplace_back(c.block_size, c.division_type);
  }
  std::sort(out.begin(), out.end());
  return out;
}

EnvelopeReport shilov_and_envelope(SystemContext& ctx) {
  ensure_structure(ctx);
  const AlgebraDecomposition& dec = *ctx.decomposition;
  EnvelopeReport rep;
  rep.inventory = boundary_representations(ctx);
  MatrixList gens;
  for (const auto& g : ctx.system.generators) gens.push_back(g.matrix);

  std::vector<MatrixList> parts(gens.size());
  for (std::size_t c = 0; c < dec.classes.size(); ++c) {
    const IrrepClass& cls = dec.classes[c];
    const int rep_block = cls.members[0];
    EnvelopeClass ec{cls.block_size, cls.division_type, rep.inventory[rep_block].boundary};
    rep.blocks.push_back(ec);
    if (!ec.boundary) continue;
    const MatrixList imgs = restrict_images(gens, dec.blocks[rep_block].isometry);
    for (std::size_t j = 0; j < gens.size(); ++j) parts[j].push_back(imgs[j]);
  }
  for (const auto& bb : rep.inventory) {
    if (!bb.boundary) rep.shilov_ideal_blocks.push_back(bb.block);
  }
  for (auto& pj : parts) rep.envelope_generators.push_back(pj.empty() ? Matrix() : block_diag(pj));

  // Dilation route: the algebra generated by a maximal dilation of the faithful identity point.
  const DilationResult dil = maximal_dilation(ctx, identity_point(ctx.system), true, false);
  const AlgebraBasis ab = generate_algebra(dil.dilated.images, dil.dilated.level, ctx.tol);
  std::mt19937_64 rng(ctx.seed ^ 0x9e3779b97f4a7c15ULL);
  const AlgebraDecomposition ddec = decompose_algebra(ab, rng, ctx.tol);
  for (const auto& cls : ddec.classes) rep.dilation_route.push_back({cls.block_size, cls.division_type, true});
  rep.cross_check_ok = block_multiset(rep.blocks, true) == block_multiset(rep.dilation_route, true);
  return rep;
}

EnvelopeReport shilov_and_envelope(const OperatorSystem& sys, const Tolerances& tol) {
  SystemContext ctx = make_context(sys, tol);
  return shilov_and_envelope(ctx);
}

}  // namespace realnc
