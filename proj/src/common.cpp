#include "realnc/common.hpp"

#include <cmath>

namespace realnc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::DependentGenerators: return "DependentGenerators";
    case ErrorKind::NotWBalanced: return "NotWBalanced";
    case ErrorKind::SystemMismatch: return "SystemMismatch";
    case ErrorKind::NotPartitionOfUnity: return "NotPartitionOfUnity";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::InconsistentDimension: return "InconsistentDimension";
    case ErrorKind::GenericityFailure: return "GenericityFailure";
    case ErrorKind::RankDecisionFailure: return "RankDecisionFailure";
    case ErrorKind::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorKind::InfeasibleBarycenter: return "InfeasibleBarycenter";
    case ErrorKind::MinorantViolated: return "MinorantViolated";
    case ErrorKind::IndeterminateNearBoundary: return "IndeterminateNearBoundary";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MaxIterations:
    case ErrorKind::Infeasible:
    case ErrorKind::Unbounded:
    case ErrorKind::InconsistentDimension:
    case ErrorKind::GenericityFailure:
    case ErrorKind::RankDecisionFailure:
    case ErrorKind::CrossCheckMismatch:
    case ErrorKind::InfeasibleBarycenter:
    case ErrorKind::IndeterminateNearBoundary:
      return true;
    default:
      return false;
  }
}

Verdict Verdict::below(double measure, double threshold) {
  Verdict v;
  v.measure = measure;
  v.threshold = threshold;
  v.value = measure < threshold;
  v.indeterminate = measure >= threshold / 10.0 && measure <= threshold * 10.0;
  if (measure <= 0.0) {
    v.margin = std::numeric_limits<double>::infinity();
  } else {
    v.margin = v.value ? threshold / measure : measure / threshold;
  }
  return v;
}

Verdict Verdict::above(double measure, double threshold) {
  Verdict v = below(measure, threshold);
  v.value = !v.value;
  return v;
}

Verdict Verdict::exact(bool value) {
  Verdict v;
  v.value = value;
  return v;
}

void set_tolerance(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "tolerance override '" + assignment + "' is not NAME=VALUE");
  std::string name = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  if (name.size() > 4 && name.compare(name.size() - 4, 4, "_tol") == 0) name.resize(name.size() - 4);
  double value = 0.0;
  std::size_t used = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError, "tolerance '" + name + "' needs a finite number, got '" + text + "'");
  }
  if (name == "max_level") {
    if (value < 1 || value != std::floor(value)) throw Error(ErrorKind::ParseError, "max_level must be a positive integer");
    tol.max_level = static_cast<int>(value);
    return;
  }
  if (value <= 0.0) throw Error(ErrorKind::ParseError, "tolerance '" + name + "' must be positive");
  struct Slot {
    const char* name;
    double Tolerances::*field;
  };
  static const Slot slots[] = {{"structural", &Tolerances::structural}, {"identity", &Tolerances::identity},
                               {"feas", &Tolerances::feas},             {"opt", &Tolerances::opt},
                               {"uniq", &Tolerances::uniq},             {"pure", &Tolerances::pure},
                               {"mult", &Tolerances::mult},             {"conv", &Tolerances::conv},
                               {"null_rank", &Tolerances::null_rank},   {"face_rank", &Tolerances::face_rank},
                               {"face_interior", &Tolerances::face_interior}};
  for (const auto& s : slots) {
    if (name == s.name) {
      tol.*(s.field) = value;
      return;
    }
  }
  throw Error(ErrorKind::ParseError, "unknown tolerance '" + name + "'");
}

CheckedSvd::CheckedSvd(const Matrix& a, unsigned int options) {
  auto finite = [&] {
    if (!s_.allFinite()) return false;
    if ((options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) && !u_.allFinite()) return false;
    if ((options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) && !v_.allFinite()) return false;
    return true;
  };
  {
    Eigen::BDCSVD<Matrix> svd(a, options);
    s_ = svd.singularValues();
    if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) u_ = svd.matrixU();
    if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) v_ = svd.matrixV();
  }
  if (finite()) return;
  fallback_ = true;
  Eigen::JacobiSVD<Matrix> svd(a, options);
  s_ = svd.singularValues();
  if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) u_ = svd.matrixU();
  if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) v_ = svd.matrixV();
}

}  // namespace realnc
