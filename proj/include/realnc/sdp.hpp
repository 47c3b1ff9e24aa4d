#pragma once

#include "realnc/common.hpp"
#include "realnc/systems.hpp"

#include <string>
#include <vector>

namespace realnc {

/// One affine constraint sum_b <A_b, X_b> = rhs. A 0x0 coefficient stands for a zero block.
struct SdpConstraint {
  MatrixList coeffs;
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<SdpConstraint> constraints;
  MatrixList objective;  // empty when there is no objective

  int num_blocks() const { return static_cast<int>(block_dims.size()); }
  /// Appends a zero-initialized constraint and returns it for filling.
  SdpConstraint& add_constraint(double rhs);
};

struct ChoiWitness {
  MatrixList blocks;
  double residual = 0.0;  // constraint residual norm
  double min_eig = 0.0;
  int iterations = 0;
};

struct FeasibilityResult {
  bool feasible = false;
  Verdict verdict;
  ChoiWitness witness;
  double t_star = 0.0;          // max lambda_min over the affine slice (capped at 1)
  double affine_residual = 0.0; // least-squares residual of the affine system alone
  MatrixList certificate;       // dual PSD blocks S with tr S = 1 and <S, X> = t_star on the slice
  bool heuristic = false;       // true for the alternating-projection reference
  std::string report;
};

/// Decides feasibility by maximizing lambda_min over the affine slice with a primal-dual
/// interior point method. A negative optimum is certified by the dual blocks.
FeasibilityResult solve_feasibility(const SdpProblem& p, const Tolerances& tol = {});

/// Serial reference: Dykstra alternating projections between the PSD cone and the affine slice.
FeasibilityResult solve_feasibility_dykstra(const SdpProblem& p, const Tolerances& tol = {}, int max_iter = 50000);

struct OptimumResult {
  double value = 0.0;
  double lower = 0.0;  // dual bound
  double upper = 0.0;  // primal value
  ChoiWitness witness;
  int iterations = 0;
};

/// min sum <C_b, X_b> over the feasible set, solved on its minimal face.
OptimumResult optimize_linear(const SdpProblem& p, const Tolerances& tol = {});

/// Cross-check route: bisection on the level sets {objective <= t} with solve_feasibility.
OptimumResult optimize_linear_bisection(const SdpProblem& p, const Tolerances& tol = {}, double lo = -1e3,
                                        double hi = 1e3);

/// Minimal face of the feasible set found by facial reduction.
struct FaceResult {
  bool feasible = false;
  FeasibilityResult first;  // the unreduced feasibility solve
  MatrixList basis;         // per block, orthonormal columns spanning the face range
  MatrixList interior;      // a point of the feasible set that is positive definite on the face
  double t_star = 0.0;      // lambda_min of the interior point restricted to the face
  int reductions = 0;
};

FaceResult minimal_face(const SdpProblem& p, const Tolerances& tol = {});

// ---- Choi matrices of maps M_m(R) -> M_n(R), block (a,b) of C is Phi(E_ab).

enum class EntryMode { Symmetric, Skew, All };

/// Phi(A) for the map with Choi matrix C.
Matrix choi_apply(const Matrix& choi, const Matrix& a, int n);
/// Choi coefficient of entry (p,q) of Phi(A), symmetrized.
Matrix choi_entry_coeff(const Matrix& a, int n, int p, int q);
/// Adds constraints sum_i Phi_i(A_i) = target on the entries selected by mode.
struct MapTerm {
  int block;
  Matrix a;
};
void add_map_constraints(SdpProblem& prob, const std::vector<MapTerm>& terms, int n, const Matrix& target,
                         EntryMode mode);
/// Choi matrix of A -> A itself on M_m.
Matrix identity_choi(int m);

/// Kraus factorization C = sum_r w_r w_r^T; returns W = [K_1; ..; K_R] with Phi(A) = W^T (I_R kron A) W.
struct KrausForm {
  Matrix stacked;  // (R*m) x n
  int rank = 0;
  int m = 0;
};
KrausForm kraus_factor(const Matrix& choi, int m, int n, double rel_cut);

// ---- membership oracles

/// Extension problem for Phi: M_m -> M_n with Phi(I) = I, Phi(G_j) = X_j.
SdpProblem extension_problem(const OperatorSystem& sys, const NcPoint& x);

struct MembershipResult {
  bool member = false;
  Verdict verdict;
  ChoiWitness witness;
  double t_star = 0.0;
};

MembershipResult ucp_membership(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol = {});

struct HullResult {
  bool member = false;
  Verdict verdict;
  MatrixList blocks;  // one Choi block per atom
  double t_star = 0.0;
};

/// x may carry images of either symmetry; the atoms define the target signs.
HullResult hull_membership(const std::vector<NcPoint>& atoms, const NcPoint& x, const Tolerances& tol = {});

enum class ProbeTarget { GeneratedAlgebra, FullMatrixAlgebra };

struct ExtensionProbe {
  bool member = false;
  bool unique = false;
  Verdict verdict;             // value = unique
  double spread = 0.0;         // largest coordinate diameter
  MatrixList algebra_basis;    // orthonormal basis of the target algebra
  MatrixList witness;          // extension values on algebra_basis
  MatrixList second_witness;   // a different extension when non-unique
  int variation_dim = 0;       // dimension of the space of extension differences
  Matrix choi;                 // interior Choi matrix of an extension to M_m
  Matrix face_basis;           // orthonormal basis of its minimal face range
};

/// Probes the convex set of ucp extensions of the point to the algebra spanned by basis.
/// A precomputed minimal face of the extension problem may be supplied to skip facial reduction.
ExtensionProbe extension_set_probe(const OperatorSystem& sys, const NcPoint& x, const MatrixList& algebra_basis,
                                   const Tolerances& tol = {}, const FaceResult* face = nullptr);
ExtensionProbe extension_set_probe(const OperatorSystem& sys, const NcPoint& x,
                                   ProbeTarget target = ProbeTarget::GeneratedAlgebra, const Tolerances& tol = {});

}  // namespace realnc
