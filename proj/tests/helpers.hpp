#pragma once

// shared randomized-matrix builders for the test suites; every user seeds its
// own std::mt19937 so runs are reproducible

#include <random>
#include <vector>

#include "irrep/linalg.hpp"
#include "irrep/types.hpp"

namespace testutil {

inline irrep::Matrix random_ginibre(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  irrep::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = irrep::Complex(gauss(rng), gauss(rng));
  return m;
}

inline irrep::Matrix random_unitary(int d, std::mt19937& rng) {
  const irrep::Matrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<irrep::Matrix> qr(g);
  irrep::Matrix q = qr.householderQ();
  const irrep::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const irrep::Complex z = r(i, i);
    q.col(i) *= std::abs(z) > 0 ? z / std::abs(z) : irrep::Complex(1.0);
  }
  return q;
}

inline irrep::Matrix random_hermitian(int d, std::mt19937& rng) {
  const irrep::Matrix g = random_ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline irrep::Matrix random_projection(int d, int rank, std::mt19937& rng) {
  const irrep::Matrix u = random_unitary(d, rng);
  const irrep::Matrix cols = u.leftCols(rank);
  return cols * cols.adjoint();
}

// hermitian with eigenvalues drawn from the given list (repeats give the
// degenerate spectra that make decompositions interesting)
inline irrep::Matrix random_hermitian_with_spectrum(
    int d, const std::vector<double>& values, std::mt19937& rng) {
  const irrep::Matrix u = random_unitary(d, rng);
  std::uniform_int_distribution<size_t> pick(0, values.size() - 1);
  irrep::Matrix diag = irrep::Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = values[pick(rng)];
  return u * diag * u.adjoint();
}

inline irrep::Vector random_state(int d, std::mt19937& rng) {
  irrep::Vector v = random_ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

}  // namespace testutil
