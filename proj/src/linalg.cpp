#include "irrep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

namespace irrep {

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("hs_inner: operand shapes differ");
  return (a.conjugate().cwiseProduct(b)).sum();
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol;
}

std::vector<SpectralComponent> spectral_projections(const Matrix& m,
                                                    const Tolerances& tol) {
  const int d = static_cast<int>(m.rows());
  if (m.cols() != d) throw DimensionMismatch("spectral_projections: matrix not square");
  if (d == 0) throw DimensionMismatch("spectral_projections: empty matrix");
  if (!is_hermitian(m, 1e-10 * std::max(1.0, m.norm())))
    throw NonHermitianInput("spectral_projections: input is not hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("spectral_projections: eigensolver did not converge");

  const RealVector& eval = solver.eigenvalues();   // ascending
  const Matrix& evec = solver.eigenvectors();
  const double spectral_norm =
      std::max(std::abs(eval(0)), std::abs(eval(d - 1)));
  const double gap = tol.cluster_gap(spectral_norm);
  const double zero_thr = tol.zero_threshold(d);

  // walk descending, single-linkage: a gap larger than the threshold starts a
  // new cluster
  std::vector<SpectralComponent> out;
  int hi = d - 1;
  while (hi >= 0) {
    int lo = hi;
    while (lo > 0 && eval(lo) - eval(lo - 1) <= gap) --lo;
    SpectralComponent c;
    c.rank = hi - lo + 1;
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) sum += eval(i);
    c.value = sum / c.rank;
    const Matrix cols = evec.middleCols(lo, c.rank);
    c.projection = cols * cols.adjoint();
    c.is_zero = std::abs(c.value) <= zero_thr;
    out.push_back(std::move(c));
    hi = lo - 1;
  }
  return out;
}

Matrix normalize_to_isometry(const Matrix& s_tilde, const Matrix& reference,
                             double reject_tol) {
  const double target = std::real(reference.trace());
  const double gram = std::real((s_tilde.adjoint() * s_tilde).trace());
  if (!(gram > 0) || gram < 1e-24)
    throw ZeroOperator("normalize_to_isometry: vanishing operator");
  Matrix s = std::sqrt(target / gram) * s_tilde;
  const Matrix g = s.adjoint() * s;
  if ((g * g - g).norm() > reject_tol * std::max(1.0, g.norm()))
    throw NotIsometry("normalize_to_isometry: support is not a projection");
  return s;
}

Matrix projection_round(const Matrix& p, const Tolerances& tol) {
  const int d = static_cast<int>(p.rows());
  const Matrix sym = (p + p.adjoint()) / 2.0;
  if ((sym * sym - sym).norm() <= 1e-12 * d) return sym;
  Matrix out = Matrix::Zero(d, d);
  for (const auto& c : spectral_projections(sym, tol)) {
    if (c.value > 0.5) out += c.projection;
  }
  return out;
}

void fix_phases(Matrix& columns) {
  for (int j = 0; j < columns.cols(); ++j) {
    int best = 0;
    double best_mag = -1.0;
    for (int i = 0; i < columns.rows(); ++i) {
      const double mag = std::abs(columns(i, j));
      if (mag > best_mag * (1.0 + 1e-9)) {
        best_mag = mag;
        best = i;
      }
    }
    if (best_mag <= 0) continue;
    const Complex z = columns(best, j);
    columns.col(j) *= std::conj(z) / std::abs(z);
  }
}

Matrix range_basis(const Matrix& p, int expected_rank, const Tolerances& tol) {
  const int d = static_cast<int>(p.rows());
  if (p.cols() != d) throw DimensionMismatch("range_basis: matrix not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((p + p.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("range_basis: eigensolver did not converge");
  std::vector<int> keep;
  for (int i = 0; i < d; ++i)
    if (solver.eigenvalues()(i) > 0.5) keep.push_back(i);
  if (expected_rank >= 0 && static_cast<int>(keep.size()) != expected_rank)
    throw NotIsometry("range_basis: rank does not match the expected value");
  Matrix basis(d, static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<int>(j)) = solver.eigenvectors().col(keep[j]);
  fix_phases(basis);
  (void)tol;
  return basis;
}

int projection_rank(const Matrix& p) {
  const double tr = std::real(p.trace());
  const int r = static_cast<int>(std::llround(tr));
  if (std::abs(tr - r) > 1e-6)
    throw NotIsometry("projection_rank: trace is not close to an integer");
  return r;
}

Matrix evolve(const Matrix& h, double t) {
  const int d = static_cast<int>(h.rows());
  if (h.cols() != d) throw DimensionMismatch("evolve: matrix not square");
  if (!is_hermitian(h, 1e-9 * std::max(1.0, h.norm())))
    throw NonHermitianInput("evolve: generator is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver((h + h.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("evolve: eigensolver did not converge");
  Vector phases(d);
  for (int i = 0; i < d; ++i)
    phases(i) = std::exp(Complex(0.0, -t * solver.eigenvalues()(i)));
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

static int worker_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap <= 0) cap = 1;
  if (const char* env = std::getenv("IRREP_SCATTER_THREADS")) {
    const int requested = std::atoi(env);
    if (requested > 0) cap = std::min(cap, requested);
  }
  return cap;
}

void parallel_for(int n, const std::function<void(int)>& f) {
  const int workers = std::min(worker_cap(), std::max(n, 1));
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace irrep
