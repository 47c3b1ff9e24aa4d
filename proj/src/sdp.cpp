#include "realnc/sdp.hpp"

#include "ipm.hpp"
#include "realnc/structure.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace realnc {

using detail::IpmOptions;
using detail::IpmResult;
using detail::IpmStatus;
using detail::StdForm;

SdpConstraint& SdpProblem::add_constraint(double rhs) {
  SdpConstraint c;
  c.rhs = rhs;
  c.coeffs.resize(block_dims.size());
  constraints.push_back(std::move(c));
  return constraints.back();
}

namespace {

// Rows restricted to a face carry projection round-off; pivots below this relative size are dependent.
constexpr double kRowRankTol = 1e-8;

// Constraint data in the (possibly face-reduced) coordinates.
struct Slice {
  std::vector<int> dims;
  std::vector<MatrixList> a;
  Vector b;
};

Slice make_slice(const SdpProblem& p, const MatrixList* basis) {
  const int nb = p.num_blocks();
  Slice s;
  for (int k = 0; k < nb; ++k) s.dims.push_back(basis ? static_cast<int>((*basis)[k].cols()) : p.block_dims[k]);
  s.b.resize(static_cast<Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    MatrixList row(nb);
    for (int k = 0; k < nb; ++k) {
      if (k < static_cast<int>(c.coeffs.size()) && c.coeffs[k].size() > 0) {
        if (c.coeffs[k].rows() != p.block_dims[k] || c.coeffs[k].cols() != p.block_dims[k]) {
          throw Error(ErrorKind::DimensionMismatch, "constraint " + std::to_string(i) + " block " + std::to_string(k));
        }
        row[k] = basis ? Matrix((*basis)[k].transpose() * sym(c.coeffs[k]) * (*basis)[k]) : sym(c.coeffs[k]);
        if (s.dims[k] == 0) row[k].resize(0, 0);
      }
    }
    s.a.push_back(std::move(row));
    s.b(static_cast<Index>(i)) = c.rhs;
  }
  return s;
}

MatrixList lift(const MatrixList& x, const MatrixList* basis) {
  if (!basis) return x;
  MatrixList out;
  for (std::size_t k = 0; k < x.size(); ++k) out.push_back((*basis)[k] * x[k] * (*basis)[k].transpose());
  return out;
}

struct MaxMinEig {
  bool consistent = true;
  double affine_residual = 0.0;
  double t = 0.0;
  MatrixList x;     // X = Z + t I, in slice coordinates
  MatrixList cert;  // dual slack on the original blocks, trace normalized
  IpmResult info;
};

// max t s.t. X - t I PSD blockwise, A(X) = b, t <= 1.
MaxMinEig max_min_eig(const Slice& s, const Tolerances& tol) {
  MaxMinEig out;
  const int nb = static_cast<int>(s.dims.size());
  detail::RowReduction red = detail::reduce_rows(s.dims, s.a, s.b, kRowRankTol);
  out.consistent = red.consistent;
  out.affine_residual = red.residual;
  if (!red.consistent) {
    out.t = -std::numeric_limits<double>::infinity();
    return out;
  }
  int ntot = 0;
  for (int d : s.dims) ntot += d;
  if (ntot == 0) {
    // Only the zero point exists; feasible iff the (consistent) system allows it.
    out.t = 1.0;
    for (int d : s.dims) out.x.push_back(Matrix::Zero(d, d));
    out.cert = out.x;
    return out;
  }
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& xb : red.x_ls) {
    if (xb.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(xb, Eigen::EigenvaluesOnly);
    lmin = std::min(lmin, es.eigenvalues()(0));
  }
  const double shift = std::max(0.0, -lmin) + 1.0;
  const double cap = 1.0;

  StdForm f;
  f.dims = s.dims;
  f.dims.push_back(1);
  f.dims.push_back(1);
  const int ns = nb, nw = nb + 1;
  f.b.resize(static_cast<Index>(red.keep.size()) + 1);
  for (std::size_t r = 0; r < red.keep.size(); ++r) {
    const int i = red.keep[r];
    const double sc = red.scale(i);
    MatrixList row(nb + 2);
    double tr = 0.0;
    for (int k = 0; k < nb; ++k) {
      if (s.a[i][k].size() > 0) {
        row[k] = s.a[i][k] / sc;
        tr += row[k].trace();
      }
    }
    if (tr != 0.0) row[ns] = Matrix::Constant(1, 1, tr);
    f.a.push_back(std::move(row));
    f.b(static_cast<Index>(r)) = s.b(i) / sc + shift * tr;
  }
  MatrixList last(nb + 2);
  last[ns] = Matrix::Ones(1, 1);
  last[nw] = Matrix::Ones(1, 1);
  f.a.push_back(std::move(last));
  f.b(static_cast<Index>(red.keep.size())) = shift + cap;
  for (int k = 0; k < nb; ++k) f.c.push_back(Matrix::Zero(s.dims[k], s.dims[k]));
  f.c.push_back(-Matrix::Ones(1, 1));
  f.c.push_back(Matrix::Zero(1, 1));

  out.info = detail::ipm_solve(f);
  if (!out.info.usable(1e-7)) {
    throw Error(ErrorKind::MaxIterations, "feasibility solve did not converge (merit " +
                                              std::to_string(std::max({out.info.pinf, out.info.dinf, out.info.gap})) +
                                              ")");
  }
  out.t = out.info.x[ns](0, 0) - shift;
  double trs = 0.0;
  for (int k = 0; k < nb; ++k) {
    out.x.push_back(out.info.x[k] + out.t * Matrix::Identity(s.dims[k], s.dims[k]));
    out.cert.push_back(out.info.s[k]);
    trs += out.info.s[k].trace();
  }
  if (trs > 0.0) {
    for (auto& c : out.cert) c /= trs;
  }
  (void)tol;
  return out;
}

double min_eig(const MatrixList& blocks) {
  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    if (b.size() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    lmin = std::min(lmin, es.eigenvalues()(0));
  }
  return std::isfinite(lmin) ? lmin : 0.0;
}

double constraint_residual(const SdpProblem& p, const MatrixList& x) {
  double s = 0.0;
  for (const auto& c : p.constraints) {
    const double r = detail::block_inner(c.coeffs, x) - c.rhs;
    s += r * r;
  }
  return std::sqrt(s);
}

Verdict feasibility_verdict(double t, double feas_tol) {
  Verdict v = Verdict::below(std::max(0.0, -t), feas_tol);
  return v;
}

}  // namespace

FeasibilityResult solve_feasibility(const SdpProblem& p, const Tolerances& tol) {
  FeasibilityResult out;
  const Slice s = make_slice(p, nullptr);
  MaxMinEig mm = max_min_eig(s, tol);
  out.affine_residual = mm.affine_residual;
  if (!mm.consistent) {
    out.feasible = false;
    out.t_star = -std::numeric_limits<double>::infinity();
    out.verdict = Verdict::below(mm.affine_residual * 1e3 + 1.0, tol.feas);
    out.report = "affine constraints are inconsistent (residual " + std::to_string(mm.affine_residual) + ")";
    return out;
  }
  out.t_star = mm.t;
  out.feasible = mm.t >= -tol.feas;
  out.verdict = feasibility_verdict(mm.t, tol.feas);
  out.witness.blocks = mm.x;
  out.witness.min_eig = min_eig(mm.x);
  out.witness.residual = constraint_residual(p, mm.x);
  out.witness.iterations = mm.info.iterations;
  out.certificate = mm.cert;
  out.report = out.feasible ? "feasible" : "infeasible: dual certificate with <S, X> = " + std::to_string(mm.t);
  return out;
}

FaceResult minimal_face(const SdpProblem& p, const Tolerances& tol) {
  FaceResult out;
  const int nb = p.num_blocks();
  MatrixList basis;
  for (int k = 0; k < nb; ++k) basis.push_back(Matrix::Identity(p.block_dims[k], p.block_dims[k]));
  int total = 0;
  for (int d : p.block_dims) total += d;
  for (int round = 0; round <= total; ++round) {
    const Slice s = make_slice(p, round == 0 ? nullptr : &basis);
    MaxMinEig mm = max_min_eig(s, tol);
    if (round == 0) {
      out.first.affine_residual = mm.affine_residual;
      out.first.t_star = mm.t;
      out.first.feasible = mm.consistent && mm.t >= -tol.feas;
      out.first.verdict = mm.consistent ? feasibility_verdict(mm.t, tol.feas) : Verdict::below(1.0, tol.feas);
      out.first.witness.blocks = mm.x;
      out.first.witness.min_eig = mm.consistent ? min_eig(mm.x) : 0.0;
      out.first.witness.residual = mm.consistent ? constraint_residual(p, mm.x) : 0.0;
      out.first.certificate = mm.cert;
      if (!out.first.feasible) return out;
    } else if (!mm.consistent || mm.t < -10.0 * tol.feas) {
      throw Error(ErrorKind::RankDecisionFailure,
                  "facial reduction cut a feasible direction at round " + std::to_string(round));
    }
    out.reductions = round;
    int ntot = 0;
    for (int d : s.dims) ntot += d;
    if (mm.t >= tol.face_interior || ntot == 0) {
      out.feasible = true;
      out.t_star = mm.t;
      out.basis = basis;
      out.interior = lift(mm.x, &basis);
      return out;
    }
    // Exposing vector: the dual blocks vanish on every feasible point.
    double smax = 0.0;
    std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> eig(nb);
    for (int k = 0; k < nb; ++k) {
      if (s.dims[k] == 0) continue;
      eig[k].compute(sym(mm.cert[k]));
      smax = std::max(smax, eig[k].eigenvalues().maxCoeff());
    }
    bool reduced = false;
    for (int k = 0; k < nb; ++k) {
      if (s.dims[k] == 0) continue;
      const Vector& ev = eig[k].eigenvalues();
      Index keep = 0;
      while (keep < ev.size() && ev(keep) <= tol.face_rank * smax) ++keep;
      if (keep < ev.size()) {
        reduced = true;
        basis[k] = basis[k] * eig[k].eigenvectors().leftCols(keep);
      }
    }
    if (!reduced) {
      // The slice is thin but no exposing direction is resolvable; accept it.
      out.feasible = true;
      out.t_star = mm.t;
      out.basis = basis;
      out.interior = lift(mm.x, &basis);
      return out;
    }
  }
  throw Error(ErrorKind::RankDecisionFailure, "facial reduction did not terminate");
}

OptimumResult optimize_linear(const SdpProblem& p, const Tolerances& tol) {
  if (p.objective.size() != p.block_dims.size()) throw Error(ErrorKind::DimensionMismatch, "objective blocks");
  FaceResult face = minimal_face(p, tol);
  if (!face.feasible) throw Error(ErrorKind::Infeasible, "optimize_linear on an infeasible problem");
  const Slice s = make_slice(p, &face.basis);
  detail::RowReduction red = detail::reduce_rows(s.dims, s.a, s.b, kRowRankTol);
  StdForm f;
  f.dims = s.dims;
  for (std::size_t r = 0; r < red.keep.size(); ++r) {
    const int i = red.keep[r];
    MatrixList row = s.a[i];
    for (auto& m : row) {
      if (m.size() > 0) m /= red.scale(i);
    }
    f.a.push_back(std::move(row));
  }
  f.b.resize(static_cast<Index>(red.keep.size()));
  for (std::size_t r = 0; r < red.keep.size(); ++r) f.b(static_cast<Index>(r)) = s.b(red.keep[r]) / red.scale(red.keep[r]);
  for (int k = 0; k < p.num_blocks(); ++k) {
    f.c.push_back(face.basis[k].transpose() * sym(p.objective[k]) * face.basis[k]);
  }
  IpmResult r = detail::ipm_solve(f);
  if (r.status == IpmStatus::Diverged) throw Error(ErrorKind::Unbounded, "objective unbounded below");
  if (!r.usable(1e-7)) throw Error(ErrorKind::MaxIterations, "optimization did not converge");
  OptimumResult out;
  out.upper = r.pobj;
  out.lower = r.dobj;
  out.value = r.pobj;
  out.witness.blocks = lift(r.x, &face.basis);
  out.witness.min_eig = min_eig(out.witness.blocks);
  out.witness.residual = constraint_residual(p, out.witness.blocks);
  out.witness.iterations = r.iterations;
  out.iterations = r.iterations;
  return out;
}

OptimumResult optimize_linear_bisection(const SdpProblem& p, const Tolerances& tol, double lo, double hi) {
  if (p.objective.size() != p.block_dims.size()) throw Error(ErrorKind::DimensionMismatch, "objective blocks");
  // Level set {<C,X> + sigma = t, sigma >= 0} with sigma as an extra 1x1 block.
  SdpProblem level = p;
  level.block_dims.push_back(1);
  for (auto& c : level.constraints) c.coeffs.resize(level.block_dims.size());
  SdpConstraint obj;
  obj.coeffs = p.objective;
  obj.coeffs.push_back(Matrix::Ones(1, 1));
  level.constraints.push_back(obj);
  level.objective.clear();
  auto feasible_at = [&](double t, FeasibilityResult* keep) {
    level.constraints.back().rhs = t;
    FeasibilityResult fr = solve_feasibility(level, tol);
    if (keep) *keep = fr;
    return fr.feasible;
  };
  FeasibilityResult best;
  int expand = 0;
  while (!feasible_at(hi, &best)) {
    hi = hi + 2.0 * (hi - lo);
    if (++expand > 20) throw Error(ErrorKind::Unbounded, "bisection bracket could not reach the feasible set");
  }
  expand = 0;
  while (feasible_at(lo, nullptr)) {
    lo = lo - 2.0 * (hi - lo);
    if (++expand > 20) throw Error(ErrorKind::Unbounded, "objective unbounded below");
  }
  int iters = 0;
  while (hi - lo > tol.opt) {
    const double mid = 0.5 * (lo + hi);
    FeasibilityResult fr;
    if (feasible_at(mid, &fr)) {
      hi = mid;
      best = fr;
    } else {
      lo = mid;
    }
    if (++iters > 200) throw Error(ErrorKind::MaxIterations, "bisection");
  }
  OptimumResult out;
  out.lower = lo;
  out.upper = hi;
  out.value = hi;
  out.witness.blocks.assign(best.witness.blocks.begin(), best.witness.blocks.end() - 1);
  out.witness.min_eig = min_eig(out.witness.blocks);
  out.witness.residual = constraint_residual(p, out.witness.blocks);
  out.iterations = iters;
  return out;
}

FeasibilityResult solve_feasibility_dykstra(const SdpProblem& p, const Tolerances& tol, int max_iter) {
  FeasibilityResult out;
  out.heuristic = true;
  const Slice s = make_slice(p, nullptr);
  detail::RowReduction red = detail::reduce_rows(s.dims, s.a, s.b, kRowRankTol);
  out.affine_residual = red.residual;
  if (!red.consistent) {
    out.report = "affine constraints are inconsistent";
    out.verdict = Verdict::below(1.0, tol.feas);
    return out;
  }
  const int nb = static_cast<int>(s.dims.size());
  int cols = 0;
  for (int d : s.dims) cols += d * d;
  const Index nr = static_cast<Index>(red.keep.size());
  Matrix amat = Matrix::Zero(nr, cols);
  Vector bvec(nr);
  for (Index r = 0; r < nr; ++r) {
    const int i = red.keep[r];
    int off = 0;
    for (int k = 0; k < nb; ++k) {
      const int d = s.dims[k];
      if (s.a[i][k].size() > 0) amat.row(r).segment(off, d * d) = s.a[i][k].reshaped().transpose();
      off += d * d;
    }
    bvec(r) = s.b(i);
  }
  const Eigen::LDLT<Matrix> gram((amat * amat.transpose()).eval());
  auto to_vec = [&](const MatrixList& x) {
    Vector v(cols);
    int off = 0;
    for (int k = 0; k < nb; ++k) {
      v.segment(off, s.dims[k] * s.dims[k]) = x[k].reshaped();
      off += s.dims[k] * s.dims[k];
    }
    return v;
  };
  auto from_vec = [&](const Vector& v) {
    MatrixList x;
    int off = 0;
    for (int k = 0; k < nb; ++k) {
      x.push_back(sym(Eigen::Map<const Matrix>(v.data() + off, s.dims[k], s.dims[k])));
      off += s.dims[k] * s.dims[k];
    }
    return x;
  };
  auto proj_aff = [&](const Vector& v) -> Vector {
    if (nr == 0) return v;
    return v - amat.transpose() * gram.solve(amat * v - bvec);
  };
  auto proj_psd = [&](const MatrixList& x) {
    MatrixList y;
    for (const auto& b : x) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b);
      y.push_back(es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose());
    }
    return y;
  };

  Vector x = to_vec(red.x_ls);
  Vector pinc = Vector::Zero(cols), qinc = Vector::Zero(cols);
  double gap_ref = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Vector y = to_vec(proj_psd(from_vec(x + pinc)));
    pinc = x + pinc - y;
    const Vector xn = proj_aff(y + qinc);
    qinc = y + qinc - xn;
    x = xn;
    const double gap = (x - y).norm();
    const MatrixList xm = from_vec(x);
    const double lmin = min_eig(xm);
    out.witness.iterations = it + 1;
    if (gap <= tol.feas && lmin >= -tol.feas) {
      out.feasible = true;
      out.witness.blocks = xm;
      out.witness.min_eig = lmin;
      out.witness.residual = constraint_residual(p, xm);
      out.t_star = lmin;
      out.verdict = Verdict::below(std::max(0.0, -lmin), tol.feas);
      out.report = "feasible after " + std::to_string(it + 1) + " projections";
      return out;
    }
    if ((it + 1) % 1000 == 0) {
      if (gap > 10.0 * tol.feas && gap > 0.999 * gap_ref) {
        out.feasible = false;
        out.t_star = -gap;
        out.verdict = Verdict::below(gap, tol.feas);
        out.report = "stalled alternating-projection gap " + std::to_string(gap) + " (heuristic)";
        return out;
      }
      gap_ref = gap;
    }
  }
  throw Error(ErrorKind::MaxIterations, "alternating projections reached the iteration limit");
}

// ---- Choi helpers

Matrix choi_apply(const Matrix& choi, const Matrix& a, int n) {
  const Index m = a.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (a(i, j) != 0.0) out += a(i, j) * choi.block(i * n, j * n, n, n);
    }
  }
  return out;
}

Matrix choi_entry_coeff(const Matrix& a, int n, int p, int q) {
  const Index m = a.rows();
  Matrix k = Matrix::Zero(m * n, m * n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) k(i * n + p, j * n + q) = a(i, j);
  }
  return sym(k);
}

void add_map_constraints(SdpProblem& prob, const std::vector<MapTerm>& terms, int n, const Matrix& target,
                         EntryMode mode) {
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (mode == EntryMode::Symmetric && q < p) continue;
      if (mode == EntryMode::Skew && q <= p) continue;
      SdpConstraint& c = prob.add_constraint(target(p, q));
      for (const auto& t : terms) {
        Matrix k = choi_entry_coeff(t.a, n, p, q);
        if (c.coeffs[t.block].size() == 0) {
          c.coeffs[t.block] = k;
        } else {
          c.coeffs[t.block] += k;
        }
      }
    }
  }
}

Matrix identity_choi(int m) {
  // Block (a,b) is E_ab: entry (a m + p, b m + q) = delta_ap delta_bq.
  Matrix c = Matrix::Zero(m * m, m * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) c(a * m + a, b * m + b) = 1.0;
  }
  return c;
}

KrausForm kraus_factor(const Matrix& choi, int m, int n, double rel_cut) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(choi));
  const Vector& ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  if (lmax <= 0.0) throw Error(ErrorKind::RankDecisionFailure, "Choi matrix has no positive part");
  std::vector<Index> cols;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > rel_cut * lmax) {
      cols.push_back(i);
    } else if (ev(i) < -1e3 * rel_cut * lmax) {
      throw Error(ErrorKind::RankDecisionFailure, "Choi matrix eigenvalue " + std::to_string(ev(i)));
    }
  }
  KrausForm kf;
  kf.m = m;
  kf.rank = static_cast<int>(cols.size());
  kf.stacked = Matrix::Zero(static_cast<Index>(cols.size()) * m, n);
  for (std::size_t r = 0; r < cols.size(); ++r) {
    const Vector w = std::sqrt(ev(cols[r])) * es.eigenvectors().col(cols[r]);
    for (int a = 0; a < m; ++a) {
      for (int p = 0; p < n; ++p) kf.stacked(static_cast<Index>(r) * m + a, p) = w(a * n + p);
    }
  }
  return kf;
}

// ---- membership

SdpProblem extension_problem(const OperatorSystem& sys, const NcPoint& x) {
  if (static_cast<int>(x.images.size()) != sys.num_generators()) {
    throw Error(ErrorKind::DimensionMismatch, "point and system generator counts differ");
  }
  const int m = sys.ambient_dim, n = x.level;
  SdpProblem p;
  p.block_dims = {m * n};
  add_map_constraints(p, {{0, Matrix::Identity(m, m)}}, n, Matrix::Identity(n, n), EntryMode::Symmetric);
  for (int j = 0; j < sys.num_generators(); ++j) {
    const auto& g = sys.generators[j];
    add_map_constraints(p, {{0, g.matrix}}, n, x.images[j], g.sign > 0 ? EntryMode::Symmetric : EntryMode::Skew);
  }
  return p;
}

MembershipResult ucp_membership(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol) {
  const FeasibilityResult fr = solve_feasibility(extension_problem(sys, x), tol);
  MembershipResult out;
  out.member = fr.feasible;
  out.verdict = fr.verdict;
  out.verdict.value = fr.feasible;
  out.witness = fr.witness;
  out.t_star = fr.t_star;
  return out;
}

HullResult hull_membership(const std::vector<NcPoint>& atoms, const NcPoint& x, const Tolerances& tol) {
  if (atoms.empty()) throw Error(ErrorKind::DimensionMismatch, "empty atom set");
  const std::size_t d = x.images.size();
  for (const auto& a : atoms) {
    if (a.images.size() != d) throw Error(ErrorKind::SystemMismatch, "atom generator count differs from the point");
  }
  const int n = x.level;
  SdpProblem p;
  for (const auto& a : atoms) p.block_dims.push_back(a.level * n);
  std::vector<MapTerm> unit;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    unit.push_back({static_cast<int>(i), Matrix::Identity(atoms[i].level, atoms[i].level)});
  }
  add_map_constraints(p, unit, n, Matrix::Identity(n, n), EntryMode::Symmetric);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<MapTerm> terms;
    for (std::size_t i = 0; i < atoms.size(); ++i) terms.push_back({static_cast<int>(i), atoms[i].images[j]});
    add_map_constraints(p, terms, n, x.images[j], EntryMode::All);
  }
  const FeasibilityResult fr = solve_feasibility(p, tol);
  HullResult out;
  out.member = fr.feasible;
  out.verdict = fr.verdict;
  out.verdict.value = fr.feasible;
  out.blocks = fr.witness.blocks;
  out.t_star = fr.t_star;
  return out;
}

namespace {

// Orthonormal basis of Sym(r): e_u e_u^T and (e_u e_v^T + e_v e_u^T)/sqrt 2.
MatrixList sym_basis(int r) {
  MatrixList out;
  for (int u = 0; u < r; ++u) {
    for (int v = u; v < r; ++v) {
      Matrix e = Matrix::Zero(r, r);
      if (u == v) {
        e(u, u) = 1.0;
      } else {
        e(u, v) = e(v, u) = 1.0 / std::sqrt(2.0);
      }
      out.push_back(e);
    }
  }
  return out;
}

Vector flatten_values(const Matrix& choi, const MatrixList& basis, int n) {
  Vector v(static_cast<Index>(basis.size()) * n * n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    v.segment(static_cast<Index>(k) * n * n, n * n) = choi_apply(choi, basis[k], n).reshaped();
  }
  return v;
}

MatrixList unflatten_values(const Vector& v, std::size_t count, int n) {
  MatrixList out;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(Eigen::Map<const Matrix>(v.data() + static_cast<Index>(k) * n * n, n, n));
  }
  return out;
}

}  // namespace

ExtensionProbe extension_set_probe(const OperatorSystem& sys, const NcPoint& x, const MatrixList& algebra_basis,
                                   const Tolerances& tol, const FaceResult* given_face) {
  ExtensionProbe out;
  out.algebra_basis = algebra_basis;
  const int m = sys.ambient_dim, n = x.level;
  const SdpProblem prob = extension_problem(sys, x);
  const FaceResult face = given_face ? *given_face : minimal_face(prob, tol);
  out.member = face.feasible;
  if (!face.feasible) return out;
  const Matrix& v = face.basis[0];
  const int r = static_cast<int>(v.cols());
  out.choi = face.interior[0];
  out.face_basis = v;

  // D = Sym(face) intersected with the null space of the constraints.
  const MatrixList sb = sym_basis(r);
  const Index ds = static_cast<Index>(sb.size());
  MatrixList lifted;
  for (const auto& e : sb) lifted.push_back(v * e * v.transpose());
  Matrix amat(static_cast<Index>(prob.constraints.size()), ds);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    for (Index c = 0; c < ds; ++c) amat(static_cast<Index>(i), c) = frob(prob.constraints[i].coeffs[0], lifted[c]);
  }
  Matrix nul;
  {
    CheckedSvd svd(amat, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Index rank = 0;
    while (rank < s.size() && s(rank) > tol.null_rank * std::max(1.0, smax)) ++rank;
    nul = svd.matrixV().rightCols(ds - rank);
  }
  Matrix rb(static_cast<Index>(algebra_basis.size()) * n * n, ds);
  for (Index c = 0; c < ds; ++c) rb.col(c) = flatten_values(lifted[c], algebra_basis, n);
  const Matrix t = rb * nul;
  const Vector center = flatten_values(out.choi, algebra_basis, n);
  out.witness = unflatten_values(center, algebra_basis.size(), n);

  double smax_t = 0.0;
  Matrix dirs;
  if (t.cols() > 0) {
    CheckedSvd svd(t, Eigen::ComputeThinU);
    const Vector& s = svd.singularValues();
    smax_t = s.size() > 0 ? s(0) : 0.0;
    Index rank = 0;
    const double rb_scale = std::max(1.0, rb.norm());
    while (rank < s.size() && s(rank) > 1e-8 * rb_scale) ++rank;
    dirs = svd.matrixU().leftCols(rank);
  }
  out.variation_dim = static_cast<int>(dirs.cols());
  if (dirs.cols() == 0) {
    out.unique = true;
    out.spread = 0.0;
    out.verdict = Verdict::below(smax_t, tol.uniq);
    out.verdict.value = true;
    return out;
  }

  // Coordinate diameters along an orthonormal basis of the variation space.
  constexpr Index kMaxDirections = 24;
  double best = -1.0;
  for (Index l = 0; l < std::min(dirs.cols(), kMaxDirections); ++l) {
    const MatrixList u = unflatten_values(dirs.col(l), algebra_basis.size(), n);
    Matrix cobj = Matrix::Zero(m * n, m * n);
    for (std::size_t k = 0; k < algebra_basis.size(); ++k) {
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          if (u[k](p, q) != 0.0) cobj += u[k](p, q) * choi_entry_coeff(algebra_basis[k], n, p, q);
        }
      }
    }
    SdpProblem lo = prob, hi = prob;
    lo.objective = {cobj};
    hi.objective = {Matrix(-cobj)};
    const OptimumResult rmin = optimize_linear(lo, tol);
    const OptimumResult rmax = optimize_linear(hi, tol);
    const double diam = -rmax.value - rmin.value;
    if (diam > best) {
      best = diam;
      out.witness = unflatten_values(flatten_values(rmin.witness.blocks[0], algebra_basis, n), algebra_basis.size(), n);
      out.second_witness =
          unflatten_values(flatten_values(rmax.witness.blocks[0], algebra_basis, n), algebra_basis.size(), n);
    }
  }
  out.spread = std::max(0.0, best);
  out.verdict = Verdict::below(out.spread, tol.uniq);
  out.unique = out.verdict.value;
  return out;
}

ExtensionProbe extension_set_probe(const OperatorSystem& sys, const NcPoint& x, ProbeTarget target,
                                   const Tolerances& tol) {
  MatrixList basis;
  if (target == ProbeTarget::FullMatrixAlgebra) {
    basis = matrix_units(sys.ambient_dim);
  } else {
    basis = generate_algebra(sys, tol).basis;
  }
  return extension_set_probe(sys, x, basis, tol);
}

}  // namespace realnc
