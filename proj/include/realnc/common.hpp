#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace realnc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixList = std::vector<Matrix>;

/// Numerical thresholds shared by every module. Defaults are the production values.
struct Tolerances {
  double structural = 1e-9;   // input validation (signs, isometries, independence)
  double identity = 1e-12;    // arithmetic identities
  double feas = 1e-7;         // PSD / affine feasibility
  double opt = 1e-6;          // optimal values
  double uniq = 1e-6;         // extension-set coordinate diameters
  double pure = 1e-6;         // order-interval excess, relative to |phi|
  double mult = 1e-6;         // multiplicativity residual of an extension
  double conv = 1e-7;         // convexity inequality eigenvalue slack
  double null_rank = 1e-10;   // relative singular-value cut for null spaces
  double face_rank = 1e-6;    // relative eigenvalue cut for exposing vectors and Kraus ranks
  double face_interior = 1e-8; // lambda_min above which a reduced slice counts as full-dimensional
  int max_level = 16;
};

/// Applies "name=value" (e.g. "feas=1e-8", "uniq_tol=1e-5", "max_level=8"); ParseError on an unknown name or bad value.
void set_tolerance(Tolerances& tol, const std::string& assignment);

enum class ErrorKind {
  DimensionMismatch,
  SignViolation,
  DependentGenerators,
  NotWBalanced,
  SystemMismatch,
  NotPartitionOfUnity,
  NotIsometry,
  IndexOutOfRange,
  UnknownFixture,
  ParseError,
  MaxIterations,
  Infeasible,
  Unbounded,
  InconsistentDimension,
  GenericityFailure,
  RankDecisionFailure,
  CrossCheckMismatch,
  InfeasibleBarycenter,
  MinorantViolated,
  IndeterminateNearBoundary,
};

const char* to_string(ErrorKind kind);

/// True for failures of the numerics (as opposed to bad input).
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// A boolean decided by comparing a nonnegative measure against a threshold.
///
/// value is (measure < threshold). A measure inside [threshold/10, threshold*10]
/// is too close to call and the verdict is flagged indeterminate. margin is the
/// log-distance factor from the threshold (>= 10 means the verdict is definite).
struct Verdict {
  bool value = false;
  bool indeterminate = false;
  double measure = 0.0;
  double threshold = 0.0;
  double margin = std::numeric_limits<double>::infinity();

  static Verdict below(double measure, double threshold);
  /// Verdict whose value is the negation of below(): true when measure is large.
  static Verdict above(double measure, double threshold);
  static Verdict exact(bool value);
};

/// Frobenius inner product.
inline double frob(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

inline Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }
inline Matrix skew(const Matrix& a) { return 0.5 * (a - a.transpose()); }

/// Divide-and-conquer SVD with a one-sided Jacobi fallback when the former returns non-finite output
/// (Eigen 3.4.0 occasionally does on rank-deficient inputs).
class CheckedSvd {
 public:
  explicit CheckedSvd(const Matrix& a, unsigned int options = 0);
  const Vector& singularValues() const { return s_; }
  const Matrix& matrixU() const { return u_; }
  const Matrix& matrixV() const { return v_; }
  bool used_fallback() const { return fallback_; }

 private:
  Vector s_;
  Matrix u_, v_;
  bool fallback_ = false;
};

}  // namespace realnc
