#include "realnc/sampling.hpp"

#include <algorithm>

namespace realnc {

Matrix random_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(rows, cols);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) a(i, j) = g(rng);
  }
  return a;
}

Matrix random_orthogonal(Rng& rng, int n) {
  const Matrix a = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

Matrix random_isometry(Rng& rng, int rows, int cols) {
  if (cols > rows) throw Error(ErrorKind::DimensionMismatch, "isometry needs rows >= cols");
  return random_orthogonal(rng, rows).leftCols(cols);
}

ComplexMatrix random_complex_isometry(Rng& rng, int rows, int cols) {
  if (cols > rows) throw Error(ErrorKind::DimensionMismatch, "isometry needs rows >= cols");
  const ComplexMatrix a = random_gaussian(rng, rows, cols).cast<std::complex<double>>() +
                          std::complex<double>(0, 1) * random_gaussian(rng, rows, cols).cast<std::complex<double>>();
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  return qr.householderQ() * ComplexMatrix::Identity(rows, cols);
}

Matrix realify_complex(const ComplexMatrix& a) { return realify(a.real(), a.imag()); }

MatrixList amplified_generators(const OperatorSystem& sys, int r) {
  MatrixList out;
  for (const auto& g : sys.generators) {
    MatrixList copies(static_cast<std::size_t>(r), g.matrix);
    out.push_back(block_diag(copies));
  }
  return out;
}

NcPoint random_member(const OperatorSystem& sys, Rng& rng, int level, int r) {
  const int m = sys.ambient_dim;
  if (r <= 0) r = std::max(1, (level + m - 1) / m + 1);
  while (r * m < level) ++r;
  const Matrix w = random_isometry(rng, r * m, level);
  NcPoint y;
  y.level = r * m;
  y.images = amplified_generators(sys, r);
  return compress_point(y, Isometry{w});
}

ComplexNcPoint random_complex_member(const OperatorSystem& sys, Rng& rng, int level, int r) {
  const int m = sys.ambient_dim;
  if (r <= 0) r = std::max(1, (level + m - 1) / m + 1);
  while (r * m < level) ++r;
  const ComplexMatrix w = random_complex_isometry(rng, r * m, level);
  ComplexNcPoint z;
  z.level = level;
  for (const auto& big : amplified_generators(sys, r)) {
    const ComplexMatrix v = w.adjoint() * big.cast<std::complex<double>>() * w;
    z.real_part.push_back(v.real());
    z.imag_part.push_back(v.imag());
  }
  for (std::size_t j = 0; j < sys.generators.size(); ++j) {
    if (sys.generators[j].sign > 0) {
      z.real_part[j] = sym(z.real_part[j]);
      z.imag_part[j] = skew(z.imag_part[j]);
    } else {
      z.real_part[j] = skew(z.real_part[j]);
      z.imag_part[j] = sym(z.imag_part[j]);
    }
  }
  return z;
}

Matrix random_signed(Rng& rng, int n, int sign, double scale) {
  const Matrix a = random_gaussian(rng, n, n);
  Matrix s = sign > 0 ? sym(a) : skew(a);
  const double nrm = s.norm();
  if (nrm > 0) s *= scale / nrm;
  return s;
}

OperatorSystem random_system(Rng& rng, int m, const std::vector<int>& signs) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Generator> raw;
    for (int s : signs) raw.push_back({random_signed(rng, m, s), s});
    try {
      return validate_system(m, raw, {}, "random");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DependentGenerators) throw;
    }
  }
  throw Error(ErrorKind::DependentGenerators, "could not draw an independent system");
}

}  // namespace realnc
