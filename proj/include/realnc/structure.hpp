#pragma once

#include "realnc/common.hpp"
#include "realnc/systems.hpp"

#include <random>
#include <vector>

namespace realnc {

/// Orthonormal (Frobenius) basis of {S : S X = X S and S X^T = X^T S for every image X}.
struct CommutantBasis {
  int level = 1;
  MatrixList basis;
  int dim = 0;
  double threshold = 0.0;  // singular-value cut used for the null space
};

enum class CommutantKind { Reducible, R, C, H };
const char* to_string(CommutantKind k);

struct CommutantType {
  CommutantKind kind = CommutantKind::Reducible;
  int sym_dim = 0;
  int full_dim = 0;
  Matrix j_certificate;  // skew J with J^2 = -I commuting with the images, for kinds C and H
};

struct AlgebraBasis {
  int ambient_dim = 1;
  MatrixList basis;  // orthonormal, basis[0] = I / sqrt(m)
  bool closed = false;
};

struct AlgebraBlock {
  Matrix isometry;  // m x block_size, range is a minimal invariant subspace
  int block_size = 0;
  CommutantKind division_type = CommutantKind::R;
  int multiplicity = 1;  // size of the equivalence class this block belongs to
  int group = 0;         // equivalence class index
};

struct IrrepClass {
  std::vector<int> members;  // block indices, members[0] is the representative
  int block_size = 0;
  CommutantKind division_type = CommutantKind::R;
  MatrixList intertwiners;   // orthogonal U_k with U_k X^{rep} = X^{member k} U_k
};

struct AlgebraDecomposition {
  std::vector<AlgebraBlock> blocks;
  std::vector<IrrepClass> classes;
  double completeness_residual = 0.0;
  int attempts = 1;
};

CommutantBasis commutant(const MatrixList& images, const Tolerances& tol = {});
CommutantType commutant_type(const MatrixList& images, const Tolerances& tol = {});
/// Real dimension of the commutant of the images inside the W-balanced matrices of twice the size.
int complex_commutant_dim(const MatrixList& images, const Tolerances& tol = {});

AlgebraBasis generate_algebra(const OperatorSystem& sys, const Tolerances& tol = {});
AlgebraBasis generate_algebra(const MatrixList& generators, int m, const Tolerances& tol = {});

AlgebraDecomposition decompose_algebra(const AlgebraBasis& b, std::mt19937_64& rng, const Tolerances& tol = {});

/// V^T X V for each image.
MatrixList restrict_images(const MatrixList& images, const Matrix& v);

/// Orthonormal basis of the smallest subspace containing range(start) and invariant under ops.
Matrix cyclic_subspace(const MatrixList& ops, const Matrix& start, double rel_tol = 1e-9);

/// Orthonormal basis (columns) of the column space, cut at rel_tol of the largest singular value.
Matrix orthonormal_range(const Matrix& a, double rel_tol = 1e-9);

/// Solves T A_l = B_l T and returns an orthogonal solution, or an empty matrix when none exists.
struct Intertwiner {
  Matrix u;
  double residual = 0.0;
  int solution_dim = 0;
};
Intertwiner find_intertwiner(const MatrixList& a, const MatrixList& b, const Tolerances& tol = {});

/// Gram-Schmidt in the Frobenius inner product, dropping elements within rel_tol of the span.
MatrixList orthonormalize(const MatrixList& elems, double rel_tol = 1e-9);

/// Coordinates of x in an orthonormal basis and the residual of the projection.
Vector coordinates(const MatrixList& basis, const Matrix& x, double* residual = nullptr);

/// Matrix units E_ab of M_m(R).
MatrixList matrix_units(int m);

}  // namespace realnc
