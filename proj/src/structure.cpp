#include "realnc/structure.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

namespace realnc {

const char* to_string(CommutantKind k) {
  switch (k) {
    case CommutantKind::Reducible: return "Reducible";
    case CommutantKind::R: return "R";
    case CommutantKind::C: return "C";
    case CommutantKind::H: return "H";
  }
  return "?";
}

namespace {

// Orthonormal basis of the null space of k, as columns.
Matrix null_space(const Matrix& k, double rel_tol, double* threshold_out = nullptr) {
  const Index cols = k.cols();
  if (k.rows() == 0) return Matrix::Identity(cols, cols);
  CheckedSvd svd(k, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double thr = rel_tol * smax;
  if (threshold_out) *threshold_out = thr;
  Index rank = 0;
  if (smax > 0.0) {
    while (rank < s.size() && s(rank) > thr) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

Matrix unvec(const Vector& v, Index rows, Index cols) { return Eigen::Map<const Matrix>(v.data(), rows, cols); }

// Rows encode S X - X S = 0 for X and X^T.
Matrix commutator_operator(const MatrixList& images, Index n) {
  const Matrix eye = Matrix::Identity(n, n);
  Matrix k(2 * n * n * static_cast<Index>(images.size()), n * n);
  Index r = 0;
  for (const auto& x : images) {
    for (const Matrix& y : {Matrix(x), Matrix(x.transpose())}) {
      k.block(r, 0, n * n, n * n) = Eigen::kroneckerProduct(y.transpose(), eye) - Eigen::kroneckerProduct(eye, y);
      r += n * n;
    }
  }
  return k;
}

}  // namespace

Matrix orthonormal_range(const Matrix& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  CheckedSvd svd(a, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  if (s(0) <= 0.0) return Matrix(a.rows(), 0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

MatrixList orthonormalize(const MatrixList& elems, double rel_tol) {
  MatrixList out;
  for (const auto& e : elems) {
    const double n0 = e.norm();
    if (n0 == 0.0) continue;
    Matrix v = e;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : out) v -= frob(v, b) * b;
    }
    const double nv = v.norm();
    if (nv > rel_tol * std::max(1.0, n0)) out.push_back(v / nv);
  }
  return out;
}

Vector coordinates(const MatrixList& basis, const Matrix& x, double* residual) {
  Vector c(static_cast<Index>(basis.size()));
  Matrix rest = x;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    c(static_cast<Index>(k)) = frob(basis[k], x);
    rest -= c(static_cast<Index>(k)) * basis[k];
  }
  if (residual) *residual = rest.norm();
  return c;
}

MatrixList matrix_units(int m) {
  MatrixList out;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      Matrix e = Matrix::Zero(m, m);
      e(a, b) = 1.0;
      out.push_back(e);
    }
  }
  return out;
}

CommutantBasis commutant(const MatrixList& images, const Tolerances& tol) {
  CommutantBasis out;
  const Index n = images.empty() ? 0 : images[0].rows();
  out.level = static_cast<int>(n);
  if (images.empty()) return out;
  const Matrix ns = null_space(commutator_operator(images, n), tol.null_rank, &out.threshold);
  MatrixList raw;
  for (Index c = 0; c < ns.cols(); ++c) raw.push_back(unvec(ns.col(c), n, n));
  out.basis = raw;  // already orthonormal as vectors
  out.dim = static_cast<int>(raw.size());
  return out;
}

CommutantType commutant_type(const MatrixList& images, const Tolerances& tol) {
  CommutantType t;
  if (images.empty()) throw Error(ErrorKind::DimensionMismatch, "commutant_type needs at least one image");
  const CommutantBasis cb = commutant(images, tol);
  const Index n = images[0].rows();
  t.full_dim = cb.dim;
  Matrix symv(n * n, cb.dim), skewv(n * n, cb.dim);
  for (int k = 0; k < cb.dim; ++k) {
    symv.col(k) = sym(cb.basis[k]).reshaped();
    skewv.col(k) = skew(cb.basis[k]).reshaped();
  }
  t.sym_dim = static_cast<int>(orthonormal_range(symv, 1e-8).cols());
  if (t.sym_dim > 1) {
    t.kind = CommutantKind::Reducible;
    return t;
  }
  switch (t.full_dim) {
    case 1: t.kind = CommutantKind::R; return t;
    case 2: t.kind = CommutantKind::C; break;
    case 4: t.kind = CommutantKind::H; break;
    default:
      throw Error(ErrorKind::InconsistentDimension,
                  "symmetric commutant dimension 1 with total dimension " + std::to_string(t.full_dim));
  }
  const Matrix sk = orthonormal_range(skewv, 1e-8);
  if (sk.cols() == 0) throw Error(ErrorKind::InconsistentDimension, "division commutant without skew element");
  Matrix j = unvec(sk.col(0), n, n);
  j = skew(j);
  const double c = (j.transpose() * j).trace() / static_cast<double>(n);
  t.j_certificate = j / std::sqrt(c);
  return t;
}

int complex_commutant_dim(const MatrixList& images, const Tolerances& tol) {
  if (images.empty()) return 0;
  const Index n = images[0].rows();
  MatrixList doubled;
  const Matrix zero = Matrix::Zero(n, n);
  for (const auto& x : images) doubled.push_back(realify(x, zero));
  doubled.push_back(w_matrix(static_cast<int>(n)));
  return commutant(doubled, tol).dim;
}

AlgebraBasis generate_algebra(const MatrixList& generators, int m, const Tolerances& tol) {
  MatrixList gens;
  for (const auto& g : generators) {
    gens.push_back(g);
    gens.push_back(g.transpose());
  }
  MatrixList seed{Matrix::Identity(m, m)};
  seed.insert(seed.end(), gens.begin(), gens.end());
  AlgebraBasis out;
  out.ambient_dim = m;
  out.basis = orthonormalize(seed, tol.structural);
  for (int round = 0; round < m * m + 1; ++round) {
    MatrixList grown = out.basis;
    for (const auto& b : out.basis) {
      for (const auto& g : gens) grown.push_back(b * g);
    }
    MatrixList next = orthonormalize(grown, tol.structural);
    if (next.size() == out.basis.size()) {
      out.closed = true;
      break;
    }
    out.basis = std::move(next);
  }
  return out;
}

AlgebraBasis generate_algebra(const OperatorSystem& sys, const Tolerances& tol) {
  MatrixList g;
  for (const auto& gen : sys.generators) g.push_back(gen.matrix);
  return generate_algebra(g, sys.ambient_dim, tol);
}

MatrixList restrict_images(const MatrixList& images, const Matrix& v) {
  MatrixList out;
  for (const auto& x : images) out.push_back(v.transpose() * x * v);
  return out;
}

Matrix cyclic_subspace(const MatrixList& ops, const Matrix& start, double rel_tol) {
  Matrix q = orthonormal_range(start, rel_tol);
  const Index dim = start.rows();
  for (Index round = 0; round <= dim; ++round) {
    Matrix cand(dim, q.cols() * static_cast<Index>(ops.size() + 1));
    cand.leftCols(q.cols()) = q;
    for (std::size_t k = 0; k < ops.size(); ++k) cand.middleCols(q.cols() * static_cast<Index>(k + 1), q.cols()) = ops[k] * q;
    Matrix next = orthonormal_range(cand, rel_tol);
    if (next.cols() == q.cols()) return next;
    q = next;
  }
  return q;
}

Intertwiner find_intertwiner(const MatrixList& a, const MatrixList& b, const Tolerances& tol) {
  Intertwiner out;
  if (a.empty() || a.size() != b.size()) return out;
  const Index na = a[0].rows(), nb = b[0].rows();
  if (na != nb) return out;
  const Matrix ea = Matrix::Identity(na, na), eb = Matrix::Identity(nb, nb);
  Matrix k(2 * na * nb * static_cast<Index>(a.size()), na * nb);
  Index r = 0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    for (int t = 0; t < 2; ++t) {
      const Matrix al = t == 0 ? a[l] : Matrix(a[l].transpose());
      const Matrix bl = t == 0 ? b[l] : Matrix(b[l].transpose());
      k.block(r, 0, na * nb, na * nb) = Eigen::kroneckerProduct(al.transpose(), eb) - Eigen::kroneckerProduct(ea, bl);
      r += na * nb;
    }
  }
  // Scale-aware threshold: singular values relative to the operator size.
  CheckedSvd svd(k, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  double scale = 0.0;
  for (const auto& x : a) scale = std::max(scale, x.norm());
  for (const auto& x : b) scale = std::max(scale, x.norm());
  const double thr = 1e-8 * std::max(1.0, scale);
  Index rank = 0;
  while (rank < s.size() && s(rank) > thr) ++rank;
  const Index ndim = na * nb - rank;
  out.solution_dim = static_cast<int>(ndim);
  if (ndim == 0) return out;
  const Matrix t = unvec(svd.matrixV().col(na * nb - 1), nb, na);
  Eigen::JacobiSVD<Matrix> polar(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = polar.matrixU() * polar.matrixV().transpose();
  double res = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) res = std::max(res, (out.u * a[l] - b[l] * out.u).norm());
  out.residual = res;
  if (res > 1e-6 * std::max(1.0, scale)) {
    out.u.resize(0, 0);
    out.solution_dim = 0;
  }
  (void)tol;
  return out;
}

AlgebraDecomposition decompose_algebra(const AlgebraBasis& b, std::mt19937_64& rng, const Tolerances& tol) {
  const int m = b.ambient_dim;
  const CommutantBasis comm = commutant(b.basis, tol);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr int kRetries = 8;
  for (int attempt = 1; attempt <= kRetries; ++attempt) {
    Matrix h = Matrix::Zero(m, m);
    for (const auto& c : comm.basis) h += gauss(rng) * sym(c);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Vector& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<std::pair<int, int>> clusters;  // [start, end)
    int start = 0;
    for (int i = 1; i <= m; ++i) {
      if (i == m || ev(i) - ev(i - 1) > 1e-7 * scale) {
        clusters.emplace_back(start, i);
        start = i;
      }
    }
    AlgebraDecomposition dec;
    dec.attempts = attempt;
    bool good = true;
    std::vector<MatrixList> restricted;
    for (const auto& [s0, s1] : clusters) {
      AlgebraBlock blk;
      blk.isometry = es.eigenvectors().middleCols(s0, s1 - s0);
      blk.block_size = s1 - s0;
      const Matrix proj_out = Matrix::Identity(m, m) - blk.isometry * blk.isometry.transpose();
      for (const auto& x : b.basis) {
        if ((proj_out * x * blk.isometry).norm() > 1e-7) good = false;
      }
      if (!good) break;
      MatrixList imgs = restrict_images(b.basis, blk.isometry);
      CommutantType ct;
      try {
        ct = commutant_type(imgs, tol);
      } catch (const Error&) {
        good = false;
        break;
      }
      if (ct.kind == CommutantKind::Reducible) {
        good = false;
        break;
      }
      blk.division_type = ct.kind;
      dec.blocks.push_back(blk);
      restricted.push_back(std::move(imgs));
    }
    if (!good) continue;

    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
      bool placed = false;
      for (std::size_t c = 0; c < dec.classes.size() && !placed; ++c) {
        const int rep = dec.classes[c].members[0];
        if (dec.blocks[rep].block_size != dec.blocks[i].block_size ||
            dec.blocks[rep].division_type != dec.blocks[i].division_type) {
          continue;
        }
        Intertwiner it = find_intertwiner(restricted[rep], restricted[i], tol);
        if (it.u.size() > 0) {
          dec.classes[c].members.push_back(static_cast<int>(i));
          dec.classes[c].intertwiners.push_back(it.u);
          dec.blocks[i].group = static_cast<int>(c);
          placed = true;
        }
      }
      if (!placed) {
        IrrepClass cls;
        cls.members = {static_cast<int>(i)};
        cls.block_size = dec.blocks[i].block_size;
        cls.division_type = dec.blocks[i].division_type;
        cls.intertwiners = {Matrix::Identity(cls.block_size, cls.block_size)};
        dec.blocks[i].group = static_cast<int>(dec.classes.size());
        dec.classes.push_back(cls);
      }
    }
    for (auto& blk : dec.blocks) blk.multiplicity = static_cast<int>(dec.classes[blk.group].members.size());
    Matrix sum = Matrix::Zero(m, m);
    for (const auto& blk : dec.blocks) sum += blk.isometry * blk.isometry.transpose();
    dec.completeness_residual = (sum - Matrix::Identity(m, m)).norm();
    return dec;
  }
  throw Error(ErrorKind::GenericityFailure, "no generic commutant element after " + std::to_string(kRetries) + " draws");
}

}  // namespace realnc
