#include "realnc/systems.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace realnc {

namespace {

std::string dims(const Matrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

Matrix enforce_sign(const Matrix& a, int sign) { return sign > 0 ? sym(a) : skew(a); }

double sign_residual(const Matrix& a, int sign) {
  return (a.transpose() - static_cast<double>(sign) * a).norm();
}

}  // namespace

MatrixList OperatorSystem::basis() const {
  MatrixList out;
  out.reserve(generators.size() + 1);
  out.push_back(Matrix::Identity(ambient_dim, ambient_dim));
  for (const auto& g : generators) out.push_back(g.matrix);
  return out;
}

std::vector<int> OperatorSystem::signs() const {
  std::vector<int> s;
  for (const auto& g : generators) s.push_back(g.sign);
  return s;
}

OperatorSystem validate_system(int m, std::vector<Generator> raw, const Tolerances& tol, std::string label) {
  if (m <= 0) throw Error(ErrorKind::DimensionMismatch, "ambient dimension must be positive");
  OperatorSystem sys;
  sys.ambient_dim = m;
  sys.label = std::move(label);
  double corr = 0.0;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    auto& g = raw[j];
    if (g.matrix.rows() != m || g.matrix.cols() != m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "generator " + std::to_string(j) + " is " + dims(g.matrix) + ", expected " + std::to_string(m));
    }
    if (g.sign != 1 && g.sign != -1) throw Error(ErrorKind::SignViolation, "sign must be +1 or -1");
    const double scale = std::max(1.0, g.matrix.norm());
    const double res = sign_residual(g.matrix, g.sign);
    if (res > tol.structural * scale) {
      throw Error(ErrorKind::SignViolation, "generator " + std::to_string(j) + " residual " + std::to_string(res));
    }
    Matrix fixed = enforce_sign(g.matrix, g.sign);
    corr = std::max(corr, (fixed - g.matrix).norm());
    sys.generators.push_back({fixed, g.sign});
  }
  sys.correction_norm = corr;

  // Independence of {I, G_j}: Gram matrix of normalized elements must be nonsingular.
  const MatrixList b = sys.basis();
  const int k = static_cast<int>(b.size());
  Matrix gram(k, k);
  for (int i = 0; i < k; ++i) {
    const double ni = b[i].norm();
    if (ni < tol.structural) throw Error(ErrorKind::DependentGenerators, "zero generator");
    for (int j = 0; j < k; ++j) gram(i, j) = frob(b[i], b[j]) / (ni * b[j].norm());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.eigenvalues().minCoeff() < tol.structural) {
    throw Error(ErrorKind::DependentGenerators,
                "Gram matrix eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  return sys;
}

NcPoint make_point(const OperatorSystem& sys, MatrixList images, const Tolerances& tol) {
  if (static_cast<int>(images.size()) != sys.num_generators()) {
    throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(images.size()) + " images, system has " +
                                                  std::to_string(sys.num_generators()) + " generators");
  }
  NcPoint p;
  p.level = images.empty() ? 1 : static_cast<int>(images[0].rows());
  if (p.level > tol.max_level) {
    throw Error(ErrorKind::DimensionMismatch,
                "level " + std::to_string(p.level) + " exceeds max level " + std::to_string(tol.max_level));
  }
  for (std::size_t j = 0; j < images.size(); ++j) {
    const Matrix& x = images[j];
    if (x.rows() != p.level || x.cols() != p.level) throw Error(ErrorKind::DimensionMismatch, "image " + dims(x));
    const int s = sys.generators[j].sign;
    if (sign_residual(x, s) > tol.structural * std::max(1.0, x.norm())) {
      throw Error(ErrorKind::SignViolation, "image " + std::to_string(j) + " does not match generator sign");
    }
    p.images.push_back(enforce_sign(x, s));
  }
  return p;
}

NcPoint identity_point(const OperatorSystem& sys) {
  NcPoint p;
  p.level = sys.ambient_dim;
  for (const auto& g : sys.generators) p.images.push_back(g.matrix);
  return p;
}

NcPoint zero_point(const OperatorSystem& sys, int level) {
  NcPoint p;
  p.level = level;
  p.images.assign(sys.generators.size(), Matrix::Zero(level, level));
  return p;
}

Isometry make_isometry(const Matrix& alpha, const Tolerances& tol) {
  const Index k = alpha.cols();
  if (alpha.rows() < k) throw Error(ErrorKind::NotIsometry, "more columns than rows");
  const double res = (alpha.transpose() * alpha - Matrix::Identity(k, k)).norm();
  if (res > tol.structural * std::max<double>(1.0, static_cast<double>(k))) {
    throw Error(ErrorKind::NotIsometry, "alpha^T alpha - I residual " + std::to_string(res));
  }
  if (k == 0) return {alpha};
  Eigen::JacobiSVD<Matrix> svd(alpha, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU() * svd.matrixV().transpose()};
}

Matrix realify(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "realify " + dims(x) + " vs " + dims(y));
  }
  const Index r = x.rows(), c = x.cols();
  Matrix m(2 * r, 2 * c);
  m.topLeftCorner(r, c) = x;
  m.topRightCorner(r, c) = -y;
  m.bottomLeftCorner(r, c) = y;
  m.bottomRightCorner(r, c) = x;
  return m;
}

Matrix w_matrix(int n) { return realify(Matrix::Zero(n, n), Matrix::Identity(n, n)); }

std::pair<Matrix, Matrix> u_compress(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "u_compress " + dims(m));
  const Index n = m.rows() / 2;
  const Matrix w = w_matrix(static_cast<int>(n));
  const double res = (w.transpose() * m * w - m).norm();
  if (res > tol.structural * std::max(1.0, m.norm())) {
    throw Error(ErrorKind::NotWBalanced, "W^T M W - M residual " + std::to_string(res));
  }
  Matrix x = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
  Matrix y = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
  return {x, y};
}

NcPoint compress_point(const NcPoint& y, const Isometry& alpha) {
  if (alpha.rows() != y.level) {
    throw Error(ErrorKind::DimensionMismatch, "isometry has " + std::to_string(alpha.rows()) + " rows, point level " +
                                                  std::to_string(y.level));
  }
  NcPoint x;
  x.level = alpha.cols();
  for (const auto& im : y.images) {
    Matrix c = alpha.matrix.transpose() * im * alpha.matrix;
    // Keep exact symmetry types so compressions validate without round-off.
    if (im == im.transpose()) {
      c = sym(c);
    } else if (im == Matrix(-im.transpose())) {
      c = skew(c);
    }
    x.images.push_back(std::move(c));
  }
  return x;
}

Matrix block_diag(const MatrixList& blocks) {
  Index n = 0, c = 0;
  for (const auto& b : blocks) {
    n += b.rows();
    c += b.cols();
  }
  Matrix out = Matrix::Zero(n, c);
  Index r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    out.block(r0, c0, b.rows(), b.cols()) = b;
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

NcPoint direct_sum(const std::vector<NcPoint>& points) {
  if (points.empty()) throw Error(ErrorKind::SystemMismatch, "direct sum of no points");
  const std::size_t d = points[0].images.size();
  NcPoint out;
  out.level = 0;
  for (const auto& p : points) {
    if (p.images.size() != d) throw Error(ErrorKind::SystemMismatch, "points have different generator counts");
    out.level += p.level;
  }
  for (std::size_t j = 0; j < d; ++j) {
    // Every summand must be symmetric, or every summand skew (zero images fit both).
    bool all_sym = true, all_skew = true;
    MatrixList blocks;
    for (const auto& p : points) {
      const Matrix& x = p.images[j];
      const double scale = 1e-9 * std::max(1.0, x.norm());
      all_sym = all_sym && sign_residual(x, 1) <= scale;
      all_skew = all_skew && sign_residual(x, -1) <= scale;
      blocks.push_back(x);
    }
    if (!all_sym && !all_skew) {
      throw Error(ErrorKind::SystemMismatch, "summands disagree on the sign of generator " + std::to_string(j));
    }
    out.images.push_back(block_diag(blocks));
  }
  return out;
}

NcPoint nc_combination(const std::vector<NcPoint>& points, const MatrixList& coeffs, const Tolerances& tol) {
  if (points.size() != coeffs.size() || points.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "need one coefficient per point");
  }
  const Index n = coeffs[0].cols();
  Matrix unity = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (coeffs[i].rows() != points[i].level || coeffs[i].cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "coefficient " + std::to_string(i) + " is " + dims(coeffs[i]));
    }
    unity += coeffs[i].transpose() * coeffs[i];
  }
  const double res = (unity - Matrix::Identity(n, n)).norm();
  if (res > tol.structural * std::max<double>(1.0, static_cast<double>(n))) {
    throw Error(ErrorKind::NotPartitionOfUnity, "sum alpha_i^T alpha_i - I residual " + std::to_string(res));
  }
  NcPoint out;
  out.level = static_cast<int>(n);
  const std::size_t d = points[0].images.size();
  for (std::size_t j = 0; j < d; ++j) {
    Matrix acc = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].images.size() != d) throw Error(ErrorKind::SystemMismatch, "generator counts differ");
      acc += coeffs[i].transpose() * points[i].images[j] * coeffs[i];
    }
    out.images.push_back(acc);
  }
  return out;
}

ComplexifiedPoint complexify_point(const OperatorSystem& sys, const MatrixList& x, const MatrixList& y,
                                   const Tolerances& tol) {
  if (x.size() != y.size() || static_cast<int>(x.size()) != sys.num_generators()) {
    throw Error(ErrorKind::DimensionMismatch, "complex point image counts");
  }
  ComplexifiedPoint out;
  out.z.level = x.empty() ? 1 : static_cast<int>(x[0].rows());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const int s = sys.generators[j].sign;
    if (x[j].rows() != out.z.level || y[j].rows() != out.z.level || x[j].cols() != out.z.level ||
        y[j].cols() != out.z.level) {
      throw Error(ErrorKind::DimensionMismatch, "complex point image " + std::to_string(j));
    }
    if (sign_residual(x[j], s) > tol.structural * std::max(1.0, x[j].norm())) {
      throw Error(ErrorKind::SignViolation, "real part " + std::to_string(j));
    }
    if (sign_residual(y[j], -s) > tol.structural * std::max(1.0, y[j].norm())) {
      throw Error(ErrorKind::SignViolation, "imaginary part " + std::to_string(j));
    }
    out.z.real_part.push_back(enforce_sign(x[j], s));
    out.z.imag_part.push_back(enforce_sign(y[j], -s));
  }
  out.realified = realify_point(out.z);
  return out;
}

NcPoint realify_point(const ComplexNcPoint& z) {
  NcPoint p;
  p.level = 2 * z.level;
  for (std::size_t j = 0; j < z.real_part.size(); ++j) p.images.push_back(realify(z.real_part[j], z.imag_part[j]));
  return p;
}

Matrix shuffle_permutation(int n) {
  // Column 2i+c of the interleaved layout is column c*n+i of the block layout.
  Matrix p = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    p(i, 2 * i) = 1.0;
    p(n + i, 2 * i + 1) = 1.0;
  }
  return p;
}

OperatorSystem doubled_system(const OperatorSystem& sys, const Tolerances& tol) {
  const int m = sys.ambient_dim;
  const Matrix zero = Matrix::Zero(m, m);
  std::vector<Generator> gens;
  for (const auto& g : sys.generators) gens.push_back({realify(g.matrix, zero), g.sign});
  gens.push_back({realify(zero, Matrix::Identity(m, m)), -1});
  for (const auto& g : sys.generators) gens.push_back({realify(zero, g.matrix), -g.sign});
  return validate_system(2 * m, std::move(gens), tol, sys.label + "-doubled");
}

NcPoint doubled_point(const ComplexNcPoint& z) {
  NcPoint p;
  p.level = 2 * z.level;
  const Matrix eye = Matrix::Identity(z.level, z.level);
  const Matrix zero = Matrix::Zero(z.level, z.level);
  for (std::size_t j = 0; j < z.real_part.size(); ++j) p.images.push_back(realify(z.real_part[j], z.imag_part[j]));
  p.images.push_back(realify(zero, eye));
  for (std::size_t j = 0; j < z.real_part.size(); ++j) p.images.push_back(realify(-z.imag_part[j], z.real_part[j]));
  return p;
}

}  // namespace realnc
