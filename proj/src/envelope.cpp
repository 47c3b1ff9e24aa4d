#include "realnc/envelope.hpp"

#include "realnc/extremal.hpp"
#include "realnc/structure.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>

#ifdef REALNC_HAVE_OPENMP
#include <omp.h>
#endif

namespace realnc {

NcPolynomial NcPolynomial::scalar(std::vector<NcTerm> terms) {
  NcPolynomial f;
  f.dim = 1;
  f.entries = {std::move(terms)};
  return f;
}

int NcPolynomial::max_index() const {
  int mx = -1;
  for (const auto& e : entries) {
    for (const auto& t : e) {
      for (int w : t.word) mx = std::max(mx, w);
    }
  }
  return mx;
}

int NcPolynomial::degree() const {
  int deg = 0;
  for (const auto& e : entries) {
    for (const auto& t : e) deg = std::max(deg, static_cast<int>(t.word.size()));
  }
  return deg;
}

namespace {

Matrix eval_terms(const std::vector<NcTerm>& terms, const NcPoint& x) {
  const int n = x.level;
  const int d = static_cast<int>(x.images.size());
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& t : terms) {
    Matrix w = Matrix::Identity(n, n);
    for (int idx : t.word) {
      if (idx < 0 || idx >= d) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "word letter " + std::to_string(idx) + " with " + std::to_string(d) + " generators");
      }
      w = w * x.images[idx];
    }
    acc += t.coeff * w;
  }
  return acc;
}

Matrix kron_eye(int k, const Matrix& a) {
  return Eigen::kroneckerProduct(Matrix::Identity(k, k), a).eval();
}

double min_eig(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym(a), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Gap (I kron a)^T f(x) (I kron a) - f(a^T x a); nonnegative for convex f.
double convexity_gap(const NcPolynomial& f, const NcPoint& x, const Matrix& a) {
  const Matrix fx = eval_poly(f, x);
  const NcPoint cx = compress_point(x, Isometry{a});
  const Matrix big = kron_eye(f.dim, a);
  return min_eig(big.transpose() * fx * big - eval_poly(f, cx));
}

struct Trial {
  NcPoint x;
  Matrix a;
};

Rng trial_rng(std::uint64_t seed, int index, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(salt)};
  return Rng(seq);
}

Trial real_trial(const OperatorSystem& sys, std::uint64_t seed, int index) {
  Rng rng = trial_rng(seed, index, 1);
  std::uniform_int_distribution<int> lev(1, 4);
  const int n = lev(rng);
  std::uniform_int_distribution<int> kd(1, n);
  const int k = kd(rng);
  Trial t;
  t.x = random_member(sys, rng, n, 1 + static_cast<int>(rng() % 2));
  t.a = random_isometry(rng, n, k);
  return t;
}

// Complex samples in realified form; every other trial is a real point with a real isometry.
Trial complex_trial(const OperatorSystem& sys, std::uint64_t seed, int index) {
  if (index % 2 == 1) {
    Trial r = real_trial(sys, seed ^ 0xc0ffeeULL, index);
    ComplexNcPoint z;
    z.level = r.x.level;
    z.real_part = r.x.images;
    for (const auto& x : r.x.images) z.imag_part.push_back(Matrix::Zero(x.rows(), x.cols()));
    r.x = realify_point(z);
    r.a = realify(r.a, Matrix::Zero(r.a.rows(), r.a.cols()));
    return r;
  }
  Rng rng = trial_rng(seed, index, 2);
  std::uniform_int_distribution<int> lev(1, 3);
  const int n = lev(rng);
  std::uniform_int_distribution<int> kd(1, n);
  const int k = kd(rng);
  Trial t;
  t.x = realify_point(random_complex_member(sys, rng, n, 1 + static_cast<int>(rng() % 2)));
  t.a = realify_complex(random_complex_isometry(rng, n, k));
  return t;
}

template <typename Gen>
ConvexityVerdict run_trials(const NcPolynomial& f, const OperatorSystem& sys, int trials, std::uint64_t seed,
                            const Tolerances& tol, Gen gen, bool parallel) {
  std::vector<double> gaps(static_cast<std::size_t>(trials), 0.0);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < trials; ++i) {
      const Trial t = gen(sys, seed, i);
      gaps[i] = convexity_gap(f, t.x, t.a);
    }
  } else {
    for (int i = 0; i < trials; ++i) {
      const Trial t = gen(sys, seed, i);
      gaps[i] = convexity_gap(f, t.x, t.a);
    }
  }
  ConvexityVerdict v;
  v.samples = trials;
  v.worst = trials > 0 ? gaps[0] : 0.0;
  int worst_i = 0;
  for (int i = 1; i < trials; ++i) {
    if (gaps[i] < v.worst) {
      v.worst = gaps[i];
      worst_i = i;
    }
  }
  v.convex = v.worst >= -tol.conv;
  if (!v.convex) {
    const Trial t = gen(sys, seed, worst_i);
    v.witness_point = t.x;
    v.witness_isometry = t.a;
  }
  return v;
}

// Coefficient K with <K, C> = Phi(A)_pq, unsymmetrized.
Matrix entry_coeff_raw(const Matrix& a, int n, int p, int q) {
  const Index m = a.rows();
  Matrix k = Matrix::Zero(m * n, m * n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) k(i * n + p, j * n + q) = a(i, j);
  }
  return k;
}

// Objective coefficient of <H, (id_k kron Phi)(F)> on one Choi block.
Matrix direction_objective(const Matrix& fval, const Matrix& h, int k, int ni, int n) {
  Matrix c = Matrix::Zero(ni * n, ni * n);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const Matrix fab = fval.block(a * ni, b * ni, ni, ni);
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          const double hv = h(a * n + p, b * n + q);
          if (hv != 0.0) c += hv * entry_coeff_raw(fab, n, p, q);
        }
      }
    }
  }
  return sym(c);
}

void check_direction(const Matrix& h, int size) {
  if (h.rows() != size || h.cols() != size) {
    throw Error(ErrorKind::DimensionMismatch, "direction must be " + std::to_string(size) + "x" + std::to_string(size));
  }
  if ((h - h.transpose()).norm() > 1e-9 * std::max(1.0, h.norm()) || min_eig(h) < -1e-9) {
    throw Error(ErrorKind::DimensionMismatch, "direction must be positive semidefinite");
  }
}

SdpProblem barycenter_problem(const OperatorSystem& sys, const NcPoint& x, const std::vector<NcPoint>& atoms) {
  const int n = x.level;
  SdpProblem p;
  for (const auto& a : atoms) p.block_dims.push_back(a.level * n);
  std::vector<MapTerm> unit;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    unit.push_back({static_cast<int>(i), Matrix::Identity(atoms[i].level, atoms[i].level)});
  }
  add_map_constraints(p, unit, n, Matrix::Identity(n, n), EntryMode::Symmetric);
  for (int j = 0; j < sys.num_generators(); ++j) {
    std::vector<MapTerm> terms;
    for (std::size_t i = 0; i < atoms.size(); ++i) terms.push_back({static_cast<int>(i), atoms[i].images[j]});
    add_map_constraints(p, terms, n, x.images[j],
                        sys.generators[j].sign > 0 ? EntryMode::Symmetric : EntryMode::Skew);
  }
  return p;
}

double barycenter_residual(const OperatorSystem& sys, const NcPoint& x, const std::vector<NcPoint>& atoms,
                           const MatrixList& blocks) {
  const int n = x.level;
  Matrix unit = -Matrix::Identity(n, n);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    unit += choi_apply(blocks[i], Matrix::Identity(atoms[i].level, atoms[i].level), n);
  }
  double res = unit.norm();
  for (int j = 0; j < sys.num_generators(); ++j) {
    Matrix acc = -x.images[j];
    for (std::size_t i = 0; i < atoms.size(); ++i) acc += choi_apply(blocks[i], atoms[i].images[j], n);
    res = std::max(res, acc.norm());
  }
  return res;
}

bool same_point(const NcPoint& a, const NcPoint& b) {
  if (a.level != b.level || a.images.size() != b.images.size()) return false;
  for (std::size_t j = 0; j < a.images.size(); ++j) {
    if ((a.images[j] - b.images[j]).norm() > 1e-12) return false;
  }
  return true;
}

}  // namespace

Matrix eval_poly(const NcPolynomial& f, const NcPoint& x) {
  const int k = f.dim, n = x.level;
  if (static_cast<int>(f.entries.size()) != k * k) {
    throw Error(ErrorKind::DimensionMismatch, "polynomial entry count must be dim^2");
  }
  Matrix out(k * n, k * n);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) out.block(a * n, b * n, n, n) = eval_terms(f.entries[a * k + b], x);
  }
  return sym(out);
}

NcPolynomial complex_pair(const NcPolynomial& f, const NcPolynomial& g) {
  if (f.dim != g.dim) throw Error(ErrorKind::DimensionMismatch, "real and imaginary parts differ in size");
  const int k = f.dim;
  NcPolynomial out;
  out.dim = 2 * k;
  out.entries.resize(static_cast<std::size_t>(4 * k * k));
  auto negate = [](std::vector<NcTerm> t) {
    for (auto& x : t) x.coeff = -x.coeff;
    return t;
  };
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const auto& fe = f.entries[a * k + b];
      const auto& ge = g.entries[a * k + b];
      out.entries[a * 2 * k + b] = fe;
      out.entries[a * 2 * k + (k + b)] = negate(ge);
      out.entries[(k + a) * 2 * k + b] = ge;
      out.entries[(k + a) * 2 * k + (k + b)] = fe;
    }
  }
  return out;
}

std::pair<Matrix, Matrix> complexify_function_eval(const NcPolynomial& f, const ComplexNcPoint& z,
                                                   const Tolerances& tol) {
  const int k = f.dim, n = z.level;
  const Matrix big = eval_poly(f, realify_point(z));
  Matrix re(k * n, k * n), im(k * n, k * n);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const auto [x, y] = u_compress(big.block(a * 2 * n, b * 2 * n, 2 * n, 2 * n), tol);
      re.block(a * n, b * n, n, n) = x;
      im.block(a * n, b * n, n, n) = y;
    }
  }
  return {re, im};
}

ConvexityVerdict is_convex_sampled(const NcPolynomial& f, const OperatorSystem& sys, int trials, std::uint64_t seed,
                                   const Tolerances& tol) {
  return run_trials(f, sys, trials, seed, tol, real_trial, true);
}

ConvexityVerdict is_convex_sampled_serial(const NcPolynomial& f, const OperatorSystem& sys, int trials,
                                          std::uint64_t seed, const Tolerances& tol) {
  return run_trials(f, sys, trials, seed, tol, real_trial, false);
}

ConvexityVerdict is_convex_complex_sampled(const NcPolynomial& f, const OperatorSystem& sys, int trials,
                                           std::uint64_t seed, const Tolerances& tol) {
  return run_trials(f, sys, trials, seed, tol, complex_trial, true);
}

AtomSet make_atom_set(const OperatorSystem& sys, const std::vector<NcPoint>& atoms, const NcPolynomial& f,
                      const Tolerances& tol) {
  AtomSet s;
  for (const auto& a : atoms) {
    const NcPoint p = make_point(sys, a.images, tol);
    const MembershipResult mr = ucp_membership(sys, p, tol);
    if (!mr.member) throw Error(ErrorKind::Infeasible, "atom is not a member of the state space");
    s.atoms.push_back(p);
    s.values.push_back(eval_poly(f, p));
  }
  return s;
}

EnvelopeResult convex_envelope_value(const OperatorSystem& sys, const NcPolynomial& f, const NcPoint& x,
                                     const AtomSet& atoms, const Matrix& h, const Tolerances& tol,
                                     const EnvelopeOptions& opt) {
  const int n = x.level, k = f.dim;
  check_direction(h, k * n);
  std::vector<NcPoint> pts = atoms.atoms;
  MatrixList vals = atoms.values;
  if (opt.append_point && std::none_of(pts.begin(), pts.end(), [&](const NcPoint& a) { return same_point(a, x); })) {
    pts.push_back(x);
    vals.push_back(eval_poly(f, x));
  }
  if (opt.append_dilation) {
    const DilationResult dil = maximal_dilation(sys, x, tol);
    if (dil.dilated.level != x.level) {
      pts.push_back(dil.dilated);
      vals.push_back(eval_poly(f, dil.dilated));
    }
  }
  SdpProblem prob = barycenter_problem(sys, x, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) prob.objective.push_back(direction_objective(vals[i], h, k, pts[i].level, n));

  EnvelopeResult out;
  out.direction = h;
  out.atoms_used = static_cast<int>(pts.size());
  OptimumResult opt_res;
  try {
    opt_res = optimize_linear(prob, tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) throw Error(ErrorKind::InfeasibleBarycenter, e.what());
    throw;
  }
  out.value = opt_res.value;
  out.witness = opt_res.witness.blocks;
  out.gap_to_f = frob(h, eval_poly(f, x)) - out.value;
  out.barycenter_residual = barycenter_residual(sys, x, pts, out.witness);
  return out;
}

EnvelopeResult complex_envelope_value(const OperatorSystem& sys, const NcPolynomial& f, const NcPoint& x,
                                      const AtomSet& atoms, const Matrix& h, const Tolerances& tol) {
  const int n = x.level, k = f.dim;
  check_direction(h, k * n);
  std::vector<NcPoint> pts = atoms.atoms;
  MatrixList vals = atoms.values;
  if (std::none_of(pts.begin(), pts.end(), [&](const NcPoint& a) { return same_point(a, x); })) {
    pts.push_back(x);
    vals.push_back(eval_poly(f, x));
  }
  const std::size_t nb = pts.size();
  SdpProblem p;
  for (const auto& a : pts) p.block_dims.push_back(2 * a.level * n);

  // Real part R = (Z11 + Z22)/2 and imaginary part S = Z21 of each block Z.
  auto re_coeff = [](const Matrix& kraw) {
    const Index big = kraw.rows();
    Matrix c = Matrix::Zero(2 * big, 2 * big);
    const Matrix s = sym(kraw);
    c.topLeftCorner(big, big) = 0.5 * s;
    c.bottomRightCorner(big, big) = 0.5 * s;
    return c;
  };
  auto im_coeff = [](const Matrix& kraw) {
    const Index big = kraw.rows();
    Matrix c = Matrix::Zero(2 * big, 2 * big);
    c.bottomLeftCorner(big, big) = 0.5 * kraw;
    c.topRightCorner(big, big) = 0.5 * kraw.transpose();
    return c;
  };
  auto add_map = [&](const std::vector<Matrix>& a, const Matrix& target) {
    for (int pp = 0; pp < n; ++pp) {
      for (int qq = 0; qq < n; ++qq) {
        p.add_constraint(target(pp, qq));
        p.add_constraint(0.0);
        SdpConstraint& cre = p.constraints[p.constraints.size() - 2];
        SdpConstraint& cim = p.constraints.back();
        for (std::size_t i = 0; i < nb; ++i) {
          const Matrix kraw = entry_coeff_raw(a[i], n, pp, qq);
          cre.coeffs[i] = re_coeff(kraw);
          cim.coeffs[i] = im_coeff(kraw);
        }
      }
    }
  };
  {
    std::vector<Matrix> unit;
    for (const auto& a : pts) unit.push_back(Matrix::Identity(a.level, a.level));
    add_map(unit, Matrix::Identity(n, n));
  }
  for (int j = 0; j < sys.num_generators(); ++j) {
    std::vector<Matrix> gj;
    for (const auto& a : pts) gj.push_back(a.images[j]);
    add_map(gj, x.images[j]);
  }
  // W-balance of each realified block.
  for (std::size_t i = 0; i < nb; ++i) {
    const int big = pts[i].level * n;
    for (int r = 0; r < big; ++r) {
      for (int c = r; c < big; ++c) {
        SdpConstraint& diag = p.add_constraint(0.0);
        Matrix e = Matrix::Zero(2 * big, 2 * big);
        e(r, c) += 0.5;
        e(c, r) += 0.5;
        e(big + r, big + c) -= 0.5;
        e(big + c, big + r) -= 0.5;
        diag.coeffs[i] = e;
        SdpConstraint& off = p.add_constraint(0.0);
        Matrix o = Matrix::Zero(2 * big, 2 * big);
        o(big + r, c) += 0.5;
        o(c, big + r) += 0.5;
        o(big + c, r) += 0.5;
        o(r, big + c) += 0.5;
        off.coeffs[i] = o;
      }
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const Matrix c = direction_objective(vals[i], h, k, pts[i].level, n);
    p.objective.push_back(re_coeff(c));
  }

  EnvelopeResult out;
  out.direction = h;
  out.atoms_used = static_cast<int>(nb);
  OptimumResult r;
  try {
    r = optimize_linear(p, tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) throw Error(ErrorKind::InfeasibleBarycenter, e.what());
    throw;
  }
  out.value = r.value;
  out.witness = r.witness.blocks;
  out.gap_to_f = frob(h, eval_poly(f, x)) - out.value;
  MatrixList re_blocks;
  for (std::size_t i = 0; i < nb; ++i) {
    const Index big = out.witness[i].rows() / 2;
    re_blocks.push_back(0.5 * (out.witness[i].topLeftCorner(big, big) + out.witness[i].bottomRightCorner(big, big)));
  }
  out.barycenter_residual = barycenter_residual(sys, x, pts, re_blocks);
  return out;
}

double jensen_check(const NcPolynomial& f, const NcPoint& x, const EnvelopeResult& result) {
  return frob(result.direction, eval_poly(f, x)) - result.value;
}

MinorantVerdict affine_minorant_check(const std::vector<double>& a, const NcPolynomial& f,
                                      const std::vector<NcPoint>& samples, const NcPoint& x, const Matrix& h,
                                      double envelope_value, const Tolerances& tol) {
  if (f.dim != 1) throw Error(ErrorKind::DimensionMismatch, "affine minorants are scalar-valued");
  auto affine = [&](const NcPoint& y) {
    if (a.size() != y.images.size() + 1) throw Error(ErrorKind::DimensionMismatch, "need a_0..a_d");
    Matrix v = a[0] * Matrix::Identity(y.level, y.level);
    for (std::size_t j = 0; j < y.images.size(); ++j) v += a[j + 1] * y.images[j];
    return Matrix(sym(v));
  };
  MinorantVerdict out;
  out.worst = std::numeric_limits<double>::infinity();
  for (const auto& y : samples) {
    const double e = min_eig(eval_poly(f, y) - affine(y));
    out.worst = std::min(out.worst, e);
    if (e < -tol.conv) {
      throw Error(ErrorKind::MinorantViolated, "affine function exceeds f by " + std::to_string(-e) + " at a sample");
    }
  }
  out.valid = true;
  out.bound = frob(h, affine(x));
  out.weak_duality = out.bound <= envelope_value + tol.opt;
  return out;
}

MatrixList direction_grid(int n) {
  MatrixList grid;
  grid.push_back(Matrix::Identity(n, n));
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    if (n > 1) grid.push_back(e);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (double s : {1.0, -1.0}) {
        Vector v = Vector::Zero(n);
        v(i) = 1.0;
        v(j) = s;
        grid.push_back(0.5 * v * v.transpose());
      }
    }
  }
  return grid;
}

std::vector<EnvelopeResult> envelope_over_grid(const OperatorSystem& sys, const NcPolynomial& f, const NcPoint& x,
                                               const AtomSet& atoms, const MatrixList& grid,
                                               const Tolerances& tol) {
  std::vector<EnvelopeResult> out(grid.size());
  std::vector<std::string> errors(grid.size());
  std::vector<int> kinds(grid.size(), -1);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    try {
      out[i] = convex_envelope_value(sys, f, x, atoms, grid[i], tol);
    } catch (const Error& e) {
      errors[i] = e.what();
      kinds[i] = static_cast<int>(e.kind());
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (kinds[i] >= 0) throw Error(static_cast<ErrorKind>(kinds[i]), errors[i]);
  }
  return out;
}

std::vector<EnvelopeResult> envelope_over_grid_serial(const OperatorSystem& sys, const NcPolynomial& f,
                                                      const NcPoint& x, const AtomSet& atoms,
                                                      const MatrixList& grid, const Tolerances& tol) {
  std::vector<EnvelopeResult> out;
  for (const auto& h : grid) out.push_back(convex_envelope_value(sys, f, x, atoms, h, tol));
  return out;
}

NcPolynomial random_polynomial(Rng& rng, int num_vars, int max_degree, int num_terms) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> var(0, std::max(0, num_vars - 1));
  std::normal_distribution<double> coef(0.0, 1.0);
  std::vector<NcTerm> terms;
  for (int t = 0; t < num_terms; ++t) {
    NcTerm term;
    const int dg = num_vars == 0 ? 0 : deg(rng);
    for (int l = 0; l < dg; ++l) term.word.push_back(var(rng));
    term.coeff = coef(rng);
    terms.push_back(term);
  }
  return NcPolynomial::scalar(terms);
}

NcPolynomial random_convex_quadratic(Rng& rng, const std::vector<int>& signs, int num_squares) {
  std::normal_distribution<double> coef(0.0, 1.0);
  const int d = static_cast<int>(signs.size());
  std::vector<NcTerm> terms;
  for (int s = 0; s < num_squares; ++s) {
    // L = l_0 + sum l_j X_j, L^T L = sum_{j,k} l_j l_k X_j^T X_k with X_j^T = sign_j X_j.
    Vector l(d + 1);
    for (int j = 0; j <= d; ++j) l(j) = coef(rng);
    const double c = std::abs(coef(rng)) + 0.1;
    for (int j = 0; j <= d; ++j) {
      for (int k = 0; k <= d; ++k) {
        NcTerm t;
        double sgn = 1.0;
        if (j > 0) {
          t.word.push_back(j - 1);
          sgn = signs[j - 1];
        }
        if (k > 0) t.word.push_back(k - 1);
        t.coeff = c * sgn * l(j) * l(k);
        terms.push_back(t);
      }
    }
  }
  for (int j = 0; j <= d; ++j) {
    NcTerm t;
    if (j > 0) t.word.push_back(j - 1);
    t.coeff = coef(rng);
    terms.push_back(t);
  }
  return NcPolynomial::scalar(terms);
}

SeparationCheck separation_check(const OperatorSystem& sys, const NcPoint& x, const std::vector<NcPoint>& atoms,
                                 Rng& rng, int family_size, const Tolerances& tol) {
  SeparationCheck out;
  const int n = x.level;
  const SdpProblem prob = barycenter_problem(sys, x, atoms);
  const FaceResult face = minimal_face(prob, tol);
  if (!face.feasible) throw Error(ErrorKind::InfeasibleBarycenter, "x is not in the hull of the atoms");

  // Coordinates: symmetric matrices on each block's face range.
  struct Coord {
    std::size_t block;
    Matrix lifted;
  };
  std::vector<Coord> coords;
  for (std::size_t b = 0; b < atoms.size(); ++b) {
    const Matrix& v = face.basis[b];
    const int r = static_cast<int>(v.cols());
    for (int u = 0; u < r; ++u) {
      for (int w = u; w < r; ++w) {
        Matrix e = Matrix::Zero(r, r);
        if (u == w) {
          e(u, u) = 1.0;
        } else {
          e(u, w) = e(w, u) = std::sqrt(0.5);
        }
        coords.push_back({b, v * e * v.transpose()});
      }
    }
  }
  const Index nc = static_cast<Index>(coords.size());
  if (nc == 0) {
    out.holds = true;
    return out;
  }
  Matrix amat(static_cast<Index>(prob.constraints.size()), nc);
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    for (Index c = 0; c < nc; ++c) {
      const Matrix& coef = prob.constraints[i].coeffs[coords[c].block];
      amat(static_cast<Index>(i), c) = coef.size() == 0 ? 0.0 : frob(coef, coords[c].lifted);
    }
  }
  CheckedSvd asvd(amat, Eigen::ComputeFullV);
  Index arank = 0;
  const double amax = asvd.singularValues().size() ? asvd.singularValues()(0) : 0.0;
  while (arank < asvd.singularValues().size() && asvd.singularValues()(arank) > tol.null_rank * std::max(1.0, amax)) ++arank;
  const Matrix nul = asvd.matrixV().rightCols(nc - arank);

  auto evaluation = [&](const std::vector<NcPolynomial>& fam) {
    Matrix e(static_cast<Index>(fam.size()) * n * n, nc);
    for (std::size_t g = 0; g < fam.size(); ++g) {
      MatrixList gv;
      for (const auto& a : atoms) gv.push_back(eval_poly(fam[g], a));
      for (Index c = 0; c < nc; ++c) {
        e.col(c).segment(static_cast<Index>(g) * n * n, n * n) =
            choi_apply(coords[c].lifted, gv[coords[c].block], n).reshaped();
      }
    }
    return e;
  };

  const std::vector<int> signs = sys.signs();
  const int d = sys.num_generators();
  std::vector<NcPolynomial> convex;
  for (int i = 0; i < family_size; ++i) convex.push_back(random_convex_quadratic(rng, signs, 1));
  for (int j = 0; j < d; ++j) {
    convex.push_back(NcPolynomial::scalar({{{j}, 1.0}}));
    convex.push_back(NcPolynomial::scalar({{{j}, -1.0}}));
  }
  std::vector<NcPolynomial> monomials;
  monomials.push_back(NcPolynomial::scalar({{{}, 1.0}}));
  for (int j = 0; j < d; ++j) {
    monomials.push_back(NcPolynomial::scalar({{{j}, 1.0}}));
    for (int k = 0; k < d; ++k) monomials.push_back(NcPolynomial::scalar({{{j, k}, 1.0}}));
  }
  const Matrix ec = evaluation(convex) * nul;
  const Matrix ea = evaluation(monomials) * nul;
  auto rank_of = [](const Matrix& m) -> std::pair<int, Matrix> {
    if (m.cols() == 0 || m.rows() == 0) return {0, Matrix(m.cols(), m.cols())};
    CheckedSvd svd(m, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    Index r = 0;
    while (r < s.size() && s(r) > 1e-8 * std::max(1.0, s(0))) ++r;
    return {static_cast<int>(r), svd.matrixV().rightCols(m.cols() - r)};
  };
  Matrix both(ec.rows() + ea.rows(), ec.cols());
  both << ec, ea;
  const auto [rc, kerc] = rank_of(ec);
  const auto [rb, kerb] = rank_of(both);
  (void)kerb;
  out.convex_rank = rc;
  out.full_rank = rb;

  // Pairs of representing maps agreeing on the convex family.
  for (Index l = 0; l < kerc.cols(); ++l) {
    const Vector dir = nul * kerc.col(l);
    // Step keeping the perturbed interior point PSD on every face.
    double lam_min = std::numeric_limits<double>::infinity();
    double dnorm = 0.0;
    std::vector<Matrix> delta(atoms.size());
    for (std::size_t b = 0; b < atoms.size(); ++b) delta[b] = Matrix::Zero(face.interior[b].rows(), face.interior[b].cols());
    for (Index c = 0; c < nc; ++c) delta[coords[c].block] += dir(c) * coords[c].lifted;
    for (std::size_t b = 0; b < atoms.size(); ++b) {
      if (face.basis[b].cols() == 0) continue;
      const Matrix& v = face.basis[b];
      lam_min = std::min(lam_min, min_eig(v.transpose() * face.interior[b] * v));
      dnorm = std::max(dnorm, delta[b].norm());
    }
    if (!(dnorm > 0.0) || !std::isfinite(lam_min)) continue;
    const double step = 0.5 * lam_min / dnorm;
    const Vector diff = ea * kerc.col(l) * step;
    out.worst_pair_gap = std::max(out.worst_pair_gap, diff.cwiseAbs().maxCoeff());
    ++out.pairs_tested;
  }
  out.holds = rc == rb && out.worst_pair_gap <= tol.opt;
  return out;
}

}  // namespace realnc
