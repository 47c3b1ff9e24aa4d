#pragma once

#include "realnc/common.hpp"

#include <string>
#include <utility>
#include <vector>

namespace realnc {

struct Generator {
  Matrix matrix;
  int sign = 1;
};

/// span{I, G_1..G_d} inside M_m(R), each G_j symmetric (sign +1) or skew (sign -1).
struct OperatorSystem {
  int ambient_dim = 1;
  std::vector<Generator> generators;
  std::string label;
  double correction_norm = 0.0;  // size of the sign canonicalization

  int num_generators() const { return static_cast<int>(generators.size()); }
  /// I followed by the generators.
  MatrixList basis() const;
  std::vector<int> signs() const;
};

struct NcPoint {
  int level = 1;
  MatrixList images;
};

struct ComplexNcPoint {
  int level = 1;
  MatrixList real_part;
  MatrixList imag_part;
};

struct Isometry {
  Matrix matrix;
  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
};

OperatorSystem validate_system(int ambient_dim, std::vector<Generator> raw, const Tolerances& tol = {},
                               std::string label = {});

/// Checks image count, sizes and signs against the system, then enforces signs exactly.
NcPoint make_point(const OperatorSystem& sys, MatrixList images, const Tolerances& tol = {});
/// The tautological point G_j at level m.
NcPoint identity_point(const OperatorSystem& sys);
NcPoint zero_point(const OperatorSystem& sys, int level);

/// Tolerance-checks alpha^T alpha = I, then re-orthonormalizes by polar decomposition.
Isometry make_isometry(const Matrix& alpha, const Tolerances& tol = {});

Matrix realify(const Matrix& x, const Matrix& y);
std::pair<Matrix, Matrix> u_compress(const Matrix& m, const Tolerances& tol = {});
/// W = [[0,-I],[I,0]] at half-size n.
Matrix w_matrix(int n);

NcPoint compress_point(const NcPoint& y, const Isometry& alpha);
NcPoint direct_sum(const std::vector<NcPoint>& points);
NcPoint nc_combination(const std::vector<NcPoint>& points, const MatrixList& coeffs,
                       const Tolerances& tol = {});

struct ComplexifiedPoint {
  ComplexNcPoint z;
  NcPoint realified;
};

ComplexifiedPoint complexify_point(const OperatorSystem& sys, const MatrixList& x, const MatrixList& y,
                                   const Tolerances& tol = {});
NcPoint realify_point(const ComplexNcPoint& z);

/// Permutation P (2n x 2n) with P^T (x (+) x) P = x (kron) I_2, i.e. block layout to interleaved layout.
Matrix shuffle_permutation(int n);

/// Real form of the complexified system: generators c(G_j,0), c(0,I), c(0,G_j) in M_2m(R).
OperatorSystem doubled_system(const OperatorSystem& sys, const Tolerances& tol = {});
/// Image of a complex point under the doubled system: c(X_j,Y_j), c(0,I), c(-Y_j,X_j).
NcPoint doubled_point(const ComplexNcPoint& z);

Matrix block_diag(const MatrixList& blocks);

}  // namespace realnc
