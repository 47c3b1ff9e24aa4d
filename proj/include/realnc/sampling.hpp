#pragma once

#include "realnc/common.hpp"
#include "realnc/systems.hpp"

#include <complex>
#include <random>

namespace realnc {

using Rng = std::mt19937_64;
using ComplexMatrix = Eigen::MatrixXcd;

Matrix random_gaussian(Rng& rng, int rows, int cols);
/// Haar-distributed orthogonal matrix.
Matrix random_orthogonal(Rng& rng, int n);
/// rows x cols matrix with orthonormal columns (rows >= cols).
Matrix random_isometry(Rng& rng, int rows, int cols);
ComplexMatrix random_complex_isometry(Rng& rng, int rows, int cols);
/// [[Re, -Im], [Im, Re]].
Matrix realify_complex(const ComplexMatrix& a);

/// I_r (kron) G_j for every generator (block diagonal copies).
MatrixList amplified_generators(const OperatorSystem& sys, int r);

/// W^T (I_r (kron) G) W for a random isometry W; every member of the state space has this form.
NcPoint random_member(const OperatorSystem& sys, Rng& rng, int level, int r = 0);
/// Complex compression W^* (I_r (kron) G) W for a random complex isometry W.
ComplexNcPoint random_complex_member(const OperatorSystem& sys, Rng& rng, int level, int r = 0);

/// Random matrix with prescribed symmetry (sign +1 symmetric, -1 skew), Frobenius-normalized to `scale`.
Matrix random_signed(Rng& rng, int n, int sign, double scale = 1.0);

/// Random independent system of d generators in M_m(R) with the given signs.
OperatorSystem random_system(Rng& rng, int m, const std::vector<int>& signs);

}  // namespace realnc
