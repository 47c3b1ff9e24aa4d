#pragma once

#include "realnc/common.hpp"

#include <vector>

namespace realnc::detail {

/// min sum <C_b, X_b>  s.t.  sum_b <A_ib, X_b> = b_i,  X_b PSD.
struct StdForm {
  std::vector<int> dims;
  std::vector<MatrixList> a;  // a[i][blk]; 0x0 means a zero block
  Vector b;
  MatrixList c;               // sized blocks
};

struct IpmOptions {
  double gap_tol = 1e-11;
  double inf_tol = 1e-11;
  double usable_tol = 1e-7;  // accepted when the iteration stalls
  int max_iter = 150;
  double gamma = 0.95;
};

enum class IpmStatus { Optimal, Stalled, MaxIterations, Diverged };

struct IpmResult {
  MatrixList x;  // primal blocks
  MatrixList s;  // dual slack blocks
  Vector y;
  double pobj = 0.0;
  double dobj = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  double gap = 0.0;
  int iterations = 0;
  IpmStatus status = IpmStatus::MaxIterations;

  bool usable(double tol) const { return status != IpmStatus::Diverged && std::max({pinf, dinf, gap}) <= tol; }
};

/// Primal-dual path following, HKM direction with Mehrotra predictor-corrector, infeasible start.
/// Constraint rows must be linearly independent.
IpmResult ipm_solve(const StdForm& f, const IpmOptions& opt = {});

struct RowReduction {
  std::vector<int> keep;   // indices of an independent subset of rows
  Vector scale;            // Frobenius norm of each row
  bool consistent = true;
  double residual = 0.0;   // relative least-squares residual of the full system
  MatrixList x_ls;         // minimum-norm solution of the affine system
};

RowReduction reduce_rows(const std::vector<int>& dims, const std::vector<MatrixList>& a, const Vector& b,
                         double rank_tol);

double block_inner(const MatrixList& a, const MatrixList& x);

}  // namespace realnc::detail
