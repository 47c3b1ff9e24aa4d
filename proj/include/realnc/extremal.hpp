#pragma once

#include "realnc/common.hpp"
#include "realnc/sdp.hpp"
#include "realnc/structure.hpp"
#include "realnc/systems.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace realnc {

/// Embedding of V into its C*-envelope, realized as a sub-direct sum of irreducible blocks of C*(G).
struct EnvelopeEmbedding {
  OperatorSystem system;     // generators iota(G_j) inside M_p(R)
  std::vector<int> classes;  // irrep classes of C*(G) kept by the embedding
  bool identity = false;     // true when no class could be dropped and iota is the inclusion itself
};

/// Per-system data reused across many point queries.
struct SystemContext {
  OperatorSystem system;
  Tolerances tol;
  AlgebraBasis algebra;
  bool v_is_algebra = false;  // dim V == dim C*(G)
  Matrix v_coords;            // column k: coordinates of algebra basis element k in (I, G_1..G_d)
  std::uint64_t seed = 0x5eedULL;
  std::shared_ptr<const AlgebraDecomposition> decomposition;
  std::shared_ptr<const EnvelopeEmbedding> embedding;
};

SystemContext make_context(const OperatorSystem& sys, const Tolerances& tol = {}, std::uint64_t seed = 0x5eedULL);
/// Fills the decomposition and envelope embedding of the context if absent.
void ensure_structure(SystemContext& ctx);

struct MaximalityCertificate {
  bool member = false;
  bool value = false;
  Verdict verdict;            // decisive verdict for value
  bool unique = false;
  double spread = 0.0;        // extension-set diameter on C*(G)
  double mult_residual = 0.0; // multiplicativity defect of the unique extension
  MatrixList witness;         // extension values on the algebra basis
  MatrixList second_witness;  // a second extension when not unique
};

struct PurityCertificate {
  bool member = false;
  bool value = false;
  Verdict verdict;
  double measure = 0.0;           // relative size of the order interval off the ray
  bool reducible_shortcut = false;
  bool stinespring_checked = false;
  bool stinespring_value = false;
  int face_rank = 0;
};

struct Classification {
  bool member = false;
  bool irreducible_real = false;
  bool irreducible_complex = false;
  bool pure = false;
  bool maximal = false;
  bool extreme = false;
  bool extreme_in_complexification = false;
  CommutantKind commutant = CommutantKind::Reducible;
  Verdict member_verdict;
  Verdict pure_verdict;
  Verdict maximal_verdict;
  bool indeterminate = false;  // any sub-verdict too close to call
};

MaximalityCertificate is_maximal(const SystemContext& ctx, const NcPoint& x);
MaximalityCertificate is_maximal(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol = {});

PurityCertificate is_pure(const SystemContext& ctx, const NcPoint& x);
PurityCertificate is_pure(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol = {});

Classification classify(const SystemContext& ctx, const NcPoint& x);
Classification classify(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol = {});

/// Complex maximality of Z in the complexification, decided on its realification.
MaximalityCertificate complex_maximal(const SystemContext& ctx, const ComplexNcPoint& z);
/// Independent route: the doubled point as a point of the doubled system.
MaximalityCertificate complex_maximal_doubled(const OperatorSystem& sys, const ComplexNcPoint& z,
                                              const Tolerances& tol = {});

struct DilationResult {
  NcPoint dilated;
  Isometry isometry;  // compress_point(dilated, isometry) reproduces the input
  Classification maximal_certificate;
  bool minimality = true;
  int kraus_rank = 0;
  double compression_residual = 0.0;
};

/// With minimal = false the full x -> x (kron) I_r Stinespring form is returned instead of its cyclic part.
DilationResult maximal_dilation(SystemContext& ctx, const NcPoint& x, bool minimal = true, bool certify = true);
DilationResult maximal_dilation(const OperatorSystem& sys, const NcPoint& x, const Tolerances& tol = {});

/// Drops irrep classes of C*(G) whose removal keeps V completely order embedded.
EnvelopeEmbedding envelope_embedding(const OperatorSystem& sys, const AlgebraDecomposition& dec,
                                     const Tolerances& tol = {});

struct BoundaryBlock {
  int block = 0;  // index into the decomposition blocks
  int cls = 0;
  int block_size = 0;
  CommutantKind division_type = CommutantKind::R;
  bool boundary = false;
  Verdict verdict;
};

std::vector<BoundaryBlock> boundary_representations(SystemContext& ctx);

struct EnvelopeClass {
  int block_size = 0;
  CommutantKind division_type = CommutantKind::R;
  bool boundary = false;
};

struct EnvelopeReport {
  std::vector<EnvelopeClass> blocks;     // one per irrep class of C*(G)
  std::vector<BoundaryBlock> inventory;  // one per block of C*(G)
  MatrixList envelope_generators;        // images of G_j in the sum of boundary classes
  std::vector<int> shilov_ideal_blocks;  // non-boundary block indices
  std::vector<EnvelopeClass> dilation_route;
  bool cross_check_ok = false;
};

/// Disagreement of the two routes leaves cross_check_ok false; both routes stay in the report.
EnvelopeReport shilov_and_envelope(SystemContext& ctx);
EnvelopeReport shilov_and_envelope(const OperatorSystem& sys, const Tolerances& tol = {});

/// Sorted (size, type) multiset of classes.
std::vector<std::pair<int, CommutantKind>> block_multiset(const std::vector<EnvelopeClass>& classes,
                                                          bool boundary_only);

}  // namespace realnc
