#include "ipm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace realnc::detail {

double block_inner(const MatrixList& a, const MatrixList& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() > 0) s += frob(a[k], x[k]);
  }
  return s;
}

namespace {

double list_norm(const MatrixList& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

// Largest alpha with X + alpha dX PSD (infinity when dX keeps X PSD).
double max_step(const Matrix& x, const Matrix& dx) {
  if (x.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto l = llt.matrixL();
  Matrix t = l.solve(dx);
  Matrix m = l.solve(t.transpose()).transpose();
  m = sym(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct Residuals {
  Vector rp;
  MatrixList rd;
  double pinf, dinf, gap, pobj, dobj, mu;
};

}  // namespace

IpmResult ipm_solve(const StdForm& raw, const IpmOptions& opt) {
  // Only symmetric parts act on symmetric blocks; a skew remainder would leave a dual residual no step can remove.
  StdForm f = raw;
  for (auto& row : f.a) {
    for (auto& a : row) {
      if (a.size() > 0) a = sym(a);
    }
  }
  for (auto& c : f.c) c = sym(c);
  const int nb = static_cast<int>(f.dims.size());
  const int m = static_cast<int>(f.b.size());
  int ntot = 0;
  for (int d : f.dims) ntot += d;

  auto apply_a = [&](const MatrixList& x) {
    Vector v(m);
    for (int i = 0; i < m; ++i) v(i) = block_inner(f.a[i], x);
    return v;
  };
  auto apply_at = [&](const Vector& y) {
    MatrixList out;
    for (int k = 0; k < nb; ++k) out.push_back(Matrix::Zero(f.dims[k], f.dims[k]));
    for (int i = 0; i < m; ++i) {
      if (y(i) == 0.0) continue;
      for (int k = 0; k < nb; ++k) {
        if (f.a[i][k].size() > 0) out[k] += y(i) * f.a[i][k];
      }
    }
    return out;
  };

  // Starting point scaled to the data.
  const double bnorm = f.b.norm();
  const double cnorm = list_norm(f.c);
  IpmResult r;
  r.y = Vector::Zero(m);
  for (int k = 0; k < nb; ++k) {
    const double n = f.dims[k];
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max({10.0, std::sqrt(n), f.c[k].norm()});
    for (int i = 0; i < m; ++i) {
      const double an = f.a[i][k].size() > 0 ? f.a[i][k].norm() : 0.0;
      xi = std::max(xi, n * (1.0 + std::abs(f.b(i))) / (1.0 + an));
      eta = std::max(eta, an);
    }
    r.x.push_back(xi * Matrix::Identity(f.dims[k], f.dims[k]));
    r.s.push_back(eta * Matrix::Identity(f.dims[k], f.dims[k]));
  }

  auto residuals = [&](const IpmResult& it) {
    Residuals res;
    res.rp = f.b - apply_a(it.x);
    MatrixList aty = apply_at(it.y);
    double dsq = 0.0;
    for (int k = 0; k < nb; ++k) {
      res.rd.push_back(f.c[k] - it.s[k] - aty[k]);
      dsq += res.rd.back().squaredNorm();
    }
    res.pobj = block_inner(f.c, it.x);
    res.dobj = f.b.dot(it.y);
    const double xs = block_inner(it.x, it.s);
    res.mu = xs / std::max(1, ntot);
    res.pinf = res.rp.norm() / (1.0 + bnorm);
    res.dinf = std::sqrt(dsq) / (1.0 + cnorm);
    res.gap = std::max(std::abs(res.pobj - res.dobj), std::abs(xs)) / (1.0 + std::abs(res.pobj) + std::abs(res.dobj));
    return res;
  };

  IpmResult best = r;
  double best_merit = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int iter = 0; iter <= opt.max_iter; ++iter) {
    Residuals res = residuals(r);
    r.pinf = res.pinf;
    r.dinf = res.dinf;
    r.gap = res.gap;
    r.pobj = res.pobj;
    r.dobj = res.dobj;
    r.iterations = iter;
    const double merit = std::max({res.pinf, res.dinf, res.gap});
    if (merit < best_merit * 0.999) {
      best_merit = merit;
      best = r;
      stall = 0;
    } else if (++stall > 15) {
      best.status = best_merit <= opt.usable_tol ? IpmStatus::Stalled : IpmStatus::MaxIterations;
      return best;
    }
    if (res.pinf <= opt.inf_tol && res.dinf <= opt.inf_tol && res.gap <= opt.gap_tol) {
      r.status = IpmStatus::Optimal;
      return r;
    }
    if (iter == opt.max_iter) break;
    double xn = 0.0;
    for (const auto& b : r.x) xn = std::max(xn, b.norm());
    if (xn > 1e12 || r.y.norm() > 1e12) {
      best.status = IpmStatus::Diverged;
      return best;
    }

    // Schur complement M_ij = sum_b <A_ib, X_b A_jb S_b^{-1}>.
    MatrixList sinv(nb);
    bool ok = true;
    for (int k = 0; k < nb; ++k) {
      Eigen::LLT<Matrix> llt(r.s[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      sinv[k] = llt.solve(Matrix::Identity(f.dims[k], f.dims[k]));
      sinv[k] = sym(sinv[k]);
    }
    if (!ok) break;
    Matrix schur = Matrix::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < nb; ++k) {
        if (f.a[j][k].size() == 0) continue;
        const Matrix g = r.x[k] * f.a[j][k] * sinv[k];
        for (int i = 0; i <= j; ++i) {
          if (f.a[i][k].size() > 0) schur(i, j) += frob(f.a[i][k], g);
        }
      }
    }
    schur = schur.selfadjointView<Eigen::Upper>();
    Eigen::LLT<Matrix> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      const double reg = 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      schur.diagonal().array() += reg;
      schur_llt.compute(schur);
      if (schur_llt.info() != Eigen::Success) break;
    }

    // Direction for complementarity target R_b (without the A^T dy term).
    auto direction = [&](const MatrixList& target, MatrixList& dx, Vector& dy, MatrixList& ds) {
      Vector rhs = res.rp - apply_a(target);
      dy = schur_llt.solve(rhs);
      MatrixList atdy = apply_at(dy);
      dx.resize(nb);
      ds.resize(nb);
      for (int k = 0; k < nb; ++k) {
        ds[k] = res.rd[k] - atdy[k];
        dx[k] = target[k] + sym(r.x[k] * atdy[k] * sinv[k]);
      }
    };
    auto step_lengths = [&](const MatrixList& dx, const MatrixList& ds, double gamma, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = ap;
      for (int k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(r.x[k], dx[k]));
        ad = std::min(ad, max_step(r.s[k], ds[k]));
      }
      ap = std::min(1.0, gamma * ap);
      ad = std::min(1.0, gamma * ad);
    };

    MatrixList base(nb);
    for (int k = 0; k < nb; ++k) base[k] = -r.x[k] - sym(r.x[k] * res.rd[k] * sinv[k]);

    // Predictor.
    MatrixList dxa, dsa;
    Vector dya;
    direction(base, dxa, dya, dsa);
    double ap, ad;
    step_lengths(dxa, dsa, 1.0, ap, ad);
    double mu_aff = 0.0;
    for (int k = 0; k < nb; ++k) mu_aff += frob(r.x[k] + ap * dxa[k], r.s[k] + ad * dsa[k]);
    mu_aff /= std::max(1, ntot);
    double sigma = res.mu > 0 ? std::pow(std::clamp(mu_aff / res.mu, 0.0, 1.0), 3) : 0.0;

    // Corrector.
    MatrixList target(nb);
    for (int k = 0; k < nb; ++k) {
      target[k] = base[k] + sigma * res.mu * sinv[k] - sym(dxa[k] * dsa[k] * sinv[k]);
    }
    MatrixList dx, ds;
    Vector dy;
    direction(target, dx, dy, ds);
    step_lengths(dx, ds, opt.gamma, ap, ad);
    for (int k = 0; k < nb; ++k) {
      r.x[k] = sym(r.x[k] + ap * dx[k]);
      r.s[k] = sym(r.s[k] + ad * ds[k]);
    }
    r.y += ad * dy;
  }
  best.status = best_merit <= opt.usable_tol ? IpmStatus::Stalled : IpmStatus::MaxIterations;
  return best;
}

RowReduction reduce_rows(const std::vector<int>& dims, const std::vector<MatrixList>& a, const Vector& b,
                         double rank_tol) {
  const int m = static_cast<int>(a.size());
  int cols = 0;
  for (int d : dims) cols += d * d;
  Matrix amat = Matrix::Zero(m, cols);
  Vector bn = b;
  RowReduction out;
  out.scale = Vector::Ones(m);
  for (int i = 0; i < m; ++i) {
    int off = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const int d = dims[k];
      if (a[i][k].size() > 0) amat.row(i).segment(off, d * d) = a[i][k].reshaped().transpose();
      off += d * d;
    }
  }
  // Rows at round-off level relative to the largest are structurally zero: normalizing them would amplify noise.
  const double maxnorm = m > 0 ? amat.rowwise().norm().maxCoeff() : 0.0;
  for (int i = 0; i < m; ++i) {
    const double nrm = amat.row(i).norm();
    if (nrm > 1e-11 * maxnorm) {
      out.scale(i) = nrm;
      amat.row(i) /= nrm;
      bn(i) /= nrm;
    } else {
      amat.row(i).setZero();
    }
  }

  Matrix xvec = Vector::Zero(cols);
  if (m > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(amat.transpose());
    qr.setThreshold(rank_tol);
    const int rank = static_cast<int>(qr.rank());
    for (int i = 0; i < rank; ++i) out.keep.push_back(static_cast<int>(qr.colsPermutation().indices()(i)));
    std::sort(out.keep.begin(), out.keep.end());
    Matrix ar(rank, cols);
    Vector br(rank);
    for (int i = 0; i < rank; ++i) {
      ar.row(i) = amat.row(out.keep[i]);
      br(i) = bn(out.keep[i]);
    }
    if (rank > 0) {
      Matrix gram = ar * ar.transpose();
      Vector z = gram.ldlt().solve(br);
      xvec = ar.transpose() * z;
    }
    out.residual = (amat * xvec - bn).norm() / (1.0 + bn.norm());
    out.consistent = out.residual <= 1e-9;
  }
  int off = 0;
  for (int d : dims) {
    Matrix x = Eigen::Map<const Matrix>(xvec.data() + off, d, d);
    out.x_ls.push_back(sym(x));
    off += d * d;
  }
  return out;
}

}  // namespace realnc::detail
