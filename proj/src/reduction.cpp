#include "irrep/reduction.hpp"

#include <cmath>
#include <sstream>

namespace irrep {

void validate_density(const Matrix& rho, double tol) {
  if (rho.rows() != rho.cols())
    throw DimensionMismatch("validate_density: operator is not square");
  if (!is_hermitian(rho, 1e-8 * std::max(1.0, rho.norm())))
    throw NonHermitianInput("validate_density: operator is not hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 ||
      std::abs(rho.trace().imag()) > 1e-10)
    throw Error("validate_density: trace is not one");
  Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2.0,
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw Error("validate_density: negative eigenvalue");
}

Matrix partial_trace(const Matrix& rho, int dim_first, int dim_second,
                     bool trace_out_first) {
  if (rho.rows() != dim_first * dim_second || rho.cols() != rho.rows())
    throw DimensionMismatch("partial_trace: dimensions do not factor the space");
  const int keep = trace_out_first ? dim_second : dim_first;
  const int drop = trace_out_first ? dim_first : dim_second;
  Matrix out = Matrix::Zero(keep, keep);
  for (int a = 0; a < keep; ++a)
    for (int b = 0; b < keep; ++b)
      for (int s = 0; s < drop; ++s) {
        const int row = trace_out_first ? s * keep + a : a * drop + s;
        const int col = trace_out_first ? s * keep + b : b * drop + s;
        out(a, b) += rho(row, col);
      }
  return out;
}

ReducedHamiltonian reduce_hamiltonian(const Matrix& h,
                                      const BipartitionTable& bpt,
                                      double gate) {
  const MembershipReport report = verify_membership(h, bpt);
  const double scale = std::max(h.norm(), 1e-300);
  if (report.residual > gate * scale) {
    std::ostringstream os;
    os << "reduce_hamiltonian: operator is outside the algebra "
       << "(relative residual " << report.residual / scale << ")";
    throw NotInAlgebra(os.str());
  }
  ReducedHamiltonian out;
  out.residual = report.residual;
  out.cross_row = report.cross_row;
  for (const auto& block : bpt.blocks) {
    const int m = block.cols;
    // first multiplicity copy carries the block content
    const Matrix cells = block.basis.leftCols(m);
    out.blocks.push_back(cells.adjoint() * h * cells);
  }
  return out;
}

std::vector<Matrix> reduce_state(const Matrix& rho,
                                 const BipartitionTable& bpt) {
  if (rho.rows() != bpt.dim || rho.cols() != bpt.dim)
    throw DimensionMismatch("reduce_state: state dimension mismatch");
  std::vector<Matrix> out;
  for (const auto& block : bpt.blocks) {
    const Matrix c = block.basis.adjoint() * rho * block.basis;
    Matrix r = Matrix::Zero(block.cols, block.cols);
    for (int l = 0; l < block.cols; ++l)
      for (int k = 0; k < block.cols; ++k)
        for (int i = 0; i < block.rows; ++i)
          r(l, k) += c(i * block.cols + l, i * block.cols + k);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Matrix> reduce_state(const Vector& psi,
                                 const BipartitionTable& bpt) {
  if (psi.size() != bpt.dim)
    throw DimensionMismatch("reduce_state: state dimension mismatch");
  std::vector<Matrix> out;
  for (const auto& block : bpt.blocks) {
    const Vector c = block.basis.adjoint() * psi;
    Matrix r = Matrix::Zero(block.cols, block.cols);
    for (int l = 0; l < block.cols; ++l)
      for (int k = 0; k < block.cols; ++k)
        for (int i = 0; i < block.rows; ++i)
          r(l, k) += c(i * block.cols + l) * std::conj(c(i * block.cols + k));
    out.push_back(std::move(r));
  }
  return out;
}

SymmetrySplit split_symmetry(const Matrix& h,
                             const std::vector<Matrix>& group_generators,
                             double tol) {
  const int d = static_cast<int>(h.rows());
  if (group_generators.empty())
    throw EmptyGeneratorSet("split_symmetry: no group generators");
  for (const auto& u : group_generators) {
    if (u.rows() != d || u.cols() != d)
      throw DimensionMismatch("split_symmetry: generator dimension mismatch");
    if ((u * u.adjoint() - Matrix::Identity(d, d)).norm() > tol * d)
      throw NotAGroup("split_symmetry: generator is not unitary");
  }

  // close the generated group by breadth-first products
  constexpr int kGroupCap = 10000;
  std::vector<Matrix> elements{Matrix::Identity(d, d)};
  std::vector<Matrix> frontier = elements;
  auto known = [&](const Matrix& u) {
    for (const auto& e : elements)
      if ((e - u).norm() <= tol * d) return true;
    return false;
  };
  while (!frontier.empty()) {
    std::vector<Matrix> next;
    for (const auto& f : frontier) {
      for (const auto& g : group_generators) {
        const Matrix u = f * g;
        if (known(u)) continue;
        elements.push_back(u);
        next.push_back(u);
        if (static_cast<int>(elements.size()) > kGroupCap)
          throw NotAGroup("split_symmetry: generated set does not close");
      }
    }
    frontier = std::move(next);
  }

  SymmetrySplit out;
  out.group_size = static_cast<int>(elements.size());
  Matrix avg = Matrix::Zero(d, d);
  for (const auto& u : elements) avg += u * h * u.adjoint();
  out.symmetric = avg / double(out.group_size);
  out.remainder = h - out.symmetric;
  return out;
}

double factorization_residual(const Matrix& h, const Matrix& h_rows,
                              const Matrix& h_cols,
                              const BipartitionTable& bpt, double t) {
  const auto row_blocks = reduce_hamiltonian(h_rows, transpose(bpt));
  const auto col_blocks = reduce_hamiltonian(h_cols, bpt);
  const Matrix w = wedderburn_unitary(bpt);
  const Matrix lhs = w * evolve(h, t) * w.adjoint();

  Matrix rhs = Matrix::Zero(bpt.dim, bpt.dim);
  int at = 0;
  for (size_t q = 0; q < bpt.blocks.size(); ++q) {
    const int n = bpt.blocks[q].rows;
    const int m = bpt.blocks[q].cols;
    rhs.block(at, at, n * m, n * m) =
        kron(evolve(row_blocks.blocks[q], t), evolve(col_blocks.blocks[q], t));
    at += n * m;
  }
  return (lhs - rhs).norm();
}

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> checked_eigensolve(
    const Matrix& h, const BipartitionTable& bpt) {
  if (h.rows() != bpt.dim || h.cols() != bpt.dim)
    throw DimensionMismatch("purity_series: dimension mismatch");
  if (!is_hermitian(h, 1e-9 * std::max(1.0, h.norm())))
    throw NonHermitianInput("purity_series: generator is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw EigensolverFailure("purity_series: eigensolver failed");
  return es;
}

Vector phase_column(const Eigen::SelfAdjointEigenSolver<Matrix>& es, double t) {
  Vector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::polar(1.0, -t * es.eigenvalues()(i));
  return phases;
}

double reduced_purity(const std::vector<Matrix>& tables) {
  double purity = 0.0;
  for (const auto& r : tables) purity += r.squaredNorm();
  return purity;
}

}  // namespace

std::vector<double> purity_series(const Matrix& h, const Matrix& rho0,
                                  const BipartitionTable& bpt,
                                  const std::vector<double>& times) {
  validate_density(rho0, 1e-8);
  if (rho0.rows() != h.rows())
    throw DimensionMismatch("purity_series: state dimension mismatch");
  const auto es = checked_eigensolve(h, bpt);
  std::vector<double> out(times.size());
  for (size_t s = 0; s < times.size(); ++s) {
    const Matrix u = es.eigenvectors() *
                     phase_column(es, times[s]).asDiagonal() *
                     es.eigenvectors().adjoint();
    out[s] = reduced_purity(reduce_state(Matrix(u * rho0 * u.adjoint()), bpt));
  }
  return out;
}

std::vector<double> purity_series(const Matrix& h, const Vector& psi0,
                                  const BipartitionTable& bpt,
                                  const std::vector<double>& times) {
  if (std::abs(psi0.norm() - 1.0) > 1e-8)
    throw Error("purity_series: state is not normalized");
  if (psi0.size() != h.rows())
    throw DimensionMismatch("purity_series: state dimension mismatch");
  const auto es = checked_eigensolve(h, bpt);
  // pure states evolve as vectors, skipping the full propagator
  const Vector weights = es.eigenvectors().adjoint() * psi0;
  std::vector<double> out(times.size());
  for (size_t s = 0; s < times.size(); ++s) {
    const Vector psi_t =
        es.eigenvectors() * phase_column(es, times[s]).cwiseProduct(weights);
    out[s] = reduced_purity(reduce_state(psi_t, bpt));
  }
  return out;
}

}  // namespace irrep
