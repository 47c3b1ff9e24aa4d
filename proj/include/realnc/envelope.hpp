#pragma once

#include "realnc/common.hpp"
#include "realnc/sampling.hpp"
#include "realnc/sdp.hpp"
#include "realnc/systems.hpp"

#include <cstdint>
#include <vector>

namespace realnc {

/// coeff * X_{w_1} X_{w_2} ... with 0-based generator indices; the empty word is the identity.
struct NcTerm {
  std::vector<int> word;
  double coeff = 0.0;
};

/// dim x dim array of nc polynomials; f(x) is the symmetric part of the block matrix [p_ab(x)].
struct NcPolynomial {
  int dim = 1;
  std::vector<std::vector<NcTerm>> entries;  // row-major, dim * dim

  static NcPolynomial scalar(std::vector<NcTerm> terms);
  int max_index() const;  // largest generator index used, -1 if none
  int degree() const;
};

Matrix eval_poly(const NcPolynomial& f, const NcPoint& x);

/// c(f, g): the function x -> [[f(x), -g(x)], [g(x), f(x)]] in block layout.
NcPolynomial complex_pair(const NcPolynomial& f, const NcPolynomial& g);

/// f_c(Z) = u^* f(c(Z)) u, returned as (real, imaginary) parts.
std::pair<Matrix, Matrix> complexify_function_eval(const NcPolynomial& f, const ComplexNcPoint& z,
                                                   const Tolerances& tol = {});

struct ConvexityVerdict {
  bool convex = true;
  double worst = 0.0;  // smallest eigenvalue of the inequality gap over the samples
  int samples = 0;
  NcPoint witness_point;  // at a violation
  Matrix witness_isometry;
};

/// f(a^T x a) <= (I (kron) a)^T f(x) (I (kron) a) on random members x and isometries a.
ConvexityVerdict is_convex_sampled(const NcPolynomial& f, const OperatorSystem& sys, int trials, std::uint64_t seed,
                                   const Tolerances& tol = {});
/// Same inequality for f_c at complex points and complex isometries, tested in realified arithmetic.
ConvexityVerdict is_convex_complex_sampled(const NcPolynomial& f, const OperatorSystem& sys, int trials,
                                           std::uint64_t seed, const Tolerances& tol = {});
/// Serial reference for the sampled test; the default runs the trials in parallel.
ConvexityVerdict is_convex_sampled_serial(const NcPolynomial& f, const OperatorSystem& sys, int trials,
                                          std::uint64_t seed, const Tolerances& tol = {});

/// Finite atom set over one system with cached function values.
struct AtomSet {
  std::vector<NcPoint> atoms;
  MatrixList values;  // f(atom)
};

/// Verifies membership of every atom and caches f-values.
AtomSet make_atom_set(const OperatorSystem& sys, const std::vector<NcPoint>& atoms, const NcPolynomial& f,
                      const Tolerances& tol = {});

struct EnvelopeResult {
  double value = 0.0;  // min <H, mu(f)> over representing maps on the atoms
  Matrix direction;
  MatrixList witness;  // one Choi block per atom
  int atoms_used = 0;
  double gap_to_f = 0.0;  // <H, f(x)> - value
  double barycenter_residual = 0.0;
};

struct EnvelopeOptions {
  bool append_point = true;     // the trivial representing map must exist
  bool append_dilation = false; // also add the maximal dilation of x
};

EnvelopeResult convex_envelope_value(const OperatorSystem& sys, const NcPolynomial& f, const NcPoint& x,
                                     const AtomSet& atoms, const Matrix& h, const Tolerances& tol = {},
                                     const EnvelopeOptions& opt = {});

/// Envelope at x + i0 over the atoms y_i + i0, with complex Choi blocks stored as W-balanced real blocks.
EnvelopeResult complex_envelope_value(const OperatorSystem& sys, const NcPolynomial& f, const NcPoint& x,
                                      const AtomSet& atoms, const Matrix& h, const Tolerances& tol = {});

/// <H, f(x)> - result.value; at most opt_tol for convex f.
double jensen_check(const NcPolynomial& f, const NcPoint& x, const EnvelopeResult& result);

struct MinorantVerdict {
  bool valid = false;      // a <= f + conv_tol on every sample
  double worst = 0.0;      // smallest eigenvalue of f(y) - a(y)
  double bound = 0.0;      // <H, a(x)>
  bool weak_duality = false;
};

/// Throws MinorantViolated when a exceeds f at a sample.
MinorantVerdict affine_minorant_check(const std::vector<double>& a, const NcPolynomial& f,
                                      const std::vector<NcPoint>& samples, const NcPoint& x, const Matrix& h,
                                      double envelope_value, const Tolerances& tol = {});

/// Direction grid for level n: the identity, diagonal units and pairwise (e_i +- e_j) projections.
MatrixList direction_grid(int n);
std::vector<EnvelopeResult> envelope_over_grid(const OperatorSystem& sys, const NcPolynomial& f, const NcPoint& x,
                                               const AtomSet& atoms, const MatrixList& grid,
                                               const Tolerances& tol = {});
std::vector<EnvelopeResult> envelope_over_grid_serial(const OperatorSystem& sys, const NcPolynomial& f,
                                                      const NcPoint& x, const AtomSet& atoms,
                                                      const MatrixList& grid, const Tolerances& tol = {});

/// Separation by convex functions on the representing maps of x over the atoms.
struct SeparationCheck {
  int convex_rank = 0;    // rank of the evaluation by the convex family on map differences
  int full_rank = 0;      // rank of convex family plus all symmetrized monomials up to degree 2
  int pairs_tested = 0;
  double worst_pair_gap = 0.0;  // max disagreement on all functions among pairs agreeing on the convex family
  bool holds = false;
};
SeparationCheck separation_check(const OperatorSystem& sys, const NcPoint& x, const std::vector<NcPoint>& atoms,
                                 Rng& rng, int family_size, const Tolerances& tol = {});

/// Random polynomial helpers for property tests.
NcPolynomial random_polynomial(Rng& rng, int num_vars, int max_degree, int num_terms);
/// sum_k c_k L_k^T L_k + affine with c_k > 0, L_k affine: convex on every state space.
NcPolynomial random_convex_quadratic(Rng& rng, const std::vector<int>& signs, int num_squares);

}  // namespace realnc
