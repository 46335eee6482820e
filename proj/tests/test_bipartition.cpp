#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "irrep/bipartition.hpp"

using namespace irrep;
using testutil::random_hermitian_with_spectrum;

namespace {

Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m.diagonal() << 1.0, -1.0;
  return m;
}

Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Matrix pauli_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

// oracle: orthonormal basis of the commutant from the nullspace of the
// stacked commutator equations
std::vector<Matrix> commutant_basis(const std::vector<Matrix>& gens) {
  const int d = static_cast<int>(gens.front().rows());
  Matrix stacked(static_cast<int>(gens.size()) * d * d, d * d);
  for (size_t g = 0; g < gens.size(); ++g)
    stacked.middleRows(static_cast<int>(g) * d * d, d * d) =
        kron(Matrix::Identity(d, d), gens[g]) -
        kron(gens[g].transpose(), Matrix::Identity(d, d));
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  std::vector<Matrix> out;
  for (int i = rank; i < d * d; ++i) {
    const Vector v = svd.matrixV().col(i);
    Matrix x(d, d);
    // vec convention: entry (r, c) sits at c*d + r
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) x(r, c) = v(c * d + r);
    out.push_back(x);
  }
  return out;
}

// oracle: dimension of the unital algebra generated by the set, via the span
// of products, extended until the rank stabilizes
int algebra_dimension(const std::vector<Matrix>& gens) {
  const int d = static_cast<int>(gens.front().rows());
  std::vector<Matrix> words{Matrix::Identity(d, d)};
  std::vector<Matrix> frontier = words;
  int rank = 1, prev = 0;
  while (rank > prev) {
    prev = rank;
    std::vector<Matrix> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) next.push_back(w * g);
    words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
    Matrix stacked(static_cast<int>(words.size()), d * d);
    for (size_t i = 0; i < words.size(); ++i)
      stacked.row(static_cast<int>(i)) =
          Eigen::Map<const Vector>(words[i].data(), d * d).transpose();
    Eigen::JacobiSVD<Matrix> svd(stacked);
    const auto& sv = svd.singularValues();
    rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-9 * sv(0)) ++rank;
    if (static_cast<int>(frontier.size()) > d * d * d) break;  // safety
  }
  return rank;
}

}  // namespace

TEST_CASE("full matrix algebra on two dimensions gives one 1x2 block") {
  const auto net = decompose_generators({pauli_z(), pauli_x()});
  const auto bpt = bpt_from_network(net);
  REQUIRE(bpt.blocks.size() == 1);
  CHECK(bpt.blocks[0].rows == 1);
  CHECK(bpt.blocks[0].cols == 2);
  validate(bpt);

  // arbitrary two-by-two operators are members, with zero residual
  std::mt19937 rng(31);
  const Matrix a = testutil::random_ginibre(2, 2, rng);
  CHECK(verify_membership(a, bpt).residual < 1e-8);

  // the commutant is scalar: its table is the transpose
  const auto tbpt = transpose(bpt);
  CHECK(tbpt.blocks[0].rows == 2);
  CHECK(tbpt.blocks[0].cols == 1);
  CHECK(verify_membership(Matrix::Identity(2, 2) * Complex(0.3, 1.1), tbpt)
            .residual < 1e-10);
  CHECK(verify_membership(pauli_z(), tbpt).residual > 0.5);
}

TEST_CASE("a single nondegenerate generator gives an abelian table") {
  Matrix h = Matrix::Zero(3, 3);
  h.diagonal() << 1.0, 2.0, 3.0;
  const auto bpt = bpt_from_network(decompose_generators({h}));
  REQUIRE(bpt.blocks.size() == 3);
  for (const auto& b : bpt.blocks) {
    CHECK(b.rows == 1);
    CHECK(b.cols == 1);
  }
  CHECK(verify_membership(h, bpt).residual < 1e-10);
  Matrix offdiag = Matrix::Zero(3, 3);
  offdiag(0, 1) = 1.0;
  CHECK(verify_membership(offdiag, bpt).off_block > 0.5);
}

TEST_CASE("the identity generator gives one scalar block with full multiplicity") {
  const auto bpt =
      bpt_from_network(decompose_generators({Matrix::Identity(3, 3)}));
  REQUIRE(bpt.blocks.size() == 1);
  CHECK(bpt.blocks[0].rows == 3);
  CHECK(bpt.blocks[0].cols == 1);
  // everything commutes with scalars: the transpose accepts any operator
  std::mt19937 rng(32);
  const Matrix x = testutil::random_ginibre(3, 3, rng);
  CHECK(verify_membership(x, transpose(bpt)).residual < 1e-8);
}

TEST_CASE("doubled qubit algebra shows multiplicity two") {
  // generators acting identically on two copies
  const Matrix gx = kron(Matrix::Identity(2, 2), pauli_x());
  const Matrix gz = kron(Matrix::Identity(2, 2), pauli_z());
  const auto bpt = bpt_from_network(decompose_generators({gx, gz}));
  REQUIRE(bpt.blocks.size() == 1);
  CHECK(bpt.blocks[0].rows == 2);
  CHECK(bpt.blocks[0].cols == 2);

  CHECK(verify_membership(kron(Matrix::Identity(2, 2), pauli_y()), bpt)
            .residual < 1e-8);
  // acting differently on the copies breaks the cross-row agreement only
  Matrix different = Matrix::Zero(4, 4);
  different.topLeftCorner(2, 2) = pauli_x();
  different.bottomRightCorner(2, 2) = pauli_y();
  const auto report = verify_membership(different, bpt);
  CHECK(report.off_block < 1e-8);
  CHECK(report.cross_row > 0.5);
}

TEST_CASE("transpose is an involution and preserves block order") {
  std::mt19937 rng(33);
  const std::vector<Matrix> gens{
      random_hermitian_with_spectrum(6, {0.0, 1.0, 2.0}, rng),
      random_hermitian_with_spectrum(6, {0.0, 1.0}, rng)};
  const auto bpt = bpt_from_network(decompose_generators(gens));
  const auto back = transpose(transpose(bpt));
  REQUIRE(back.blocks.size() == bpt.blocks.size());
  for (size_t q = 0; q < bpt.blocks.size(); ++q) {
    CHECK(back.blocks[q].rows == bpt.blocks[q].rows);
    CHECK(back.blocks[q].cols == bpt.blocks[q].cols);
    CHECK((back.blocks[q].basis - bpt.blocks[q].basis).norm() == 0.0);
  }
}

TEST_CASE("block_unit operators multiply like matrix units") {
  const auto bpt = bpt_from_network(
      decompose_generators({kron(Matrix::Identity(2, 2), pauli_x()),
                            kron(Matrix::Identity(2, 2), pauli_z())}));
  const auto& block = bpt.blocks[0];
  const Matrix s01 = block_unit(block, 0, 1);
  const Matrix s10 = block_unit(block, 1, 0);
  const Matrix s00 = block_unit(block, 0, 0);
  const Matrix s11 = block_unit(block, 1, 1);
  CHECK((s01 * s10 - s00).norm() < 1e-10);
  CHECK((s10 * s01 - s11).norm() < 1e-10);
  CHECK((s01 * s01).norm() < 1e-10);
  CHECK(std::abs(hs_inner(s01, s01) - Complex(block.rows)) < 1e-10);
  CHECK(std::abs(hs_inner(s01, s10)) < 1e-10);
  CHECK(std::abs(hs_inner(s00, s11)) < 1e-10);
  // the units resolve the block's identity
  const Matrix p = s00 + s11;
  CHECK((p * p - p).norm() < 1e-10);
  CHECK(projection_rank(p) == block.rows * block.cols);
}

TEST_CASE("random generator sets match independent structure oracles") {
  std::mt19937 rng(34);
  std::uniform_int_distribution<int> dim_pick(2, 10);
  std::uniform_int_distribution<int> gen_pick(1, 3);
  const std::vector<double> spectrum{-1.0, 0.0, 1.0, 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    const int d = dim_pick(rng);
    const int n = gen_pick(rng);
    std::vector<Matrix> gens;
    for (int g = 0; g < n; ++g)
      gens.push_back(random_hermitian_with_spectrum(d, spectrum, rng));

    const auto bpt = bpt_from_network(decompose_generators(gens));
    validate(bpt);

    int total = 0, rows_sq = 0, cols_sq = 0;
    for (const auto& b : bpt.blocks) {
      total += b.rows * b.cols;
      rows_sq += b.rows * b.rows;
      cols_sq += b.cols * b.cols;
    }
    REQUIRE(total == d);

    // two independent routes to the same structure counts
    const auto comm = commutant_basis(gens);
    REQUIRE(static_cast<int>(comm.size()) == rows_sq);
    REQUIRE(algebra_dimension(gens) == cols_sq);

    // generators are members; commutant members fit the transposed table
    for (const auto& g : gens)
      REQUIRE(verify_membership(g, bpt).residual <
              1e-7 * std::max(1.0, g.norm()));
    const auto tbpt = transpose(bpt);
    for (const auto& x : comm)
      REQUIRE(verify_membership(x, tbpt).residual <
              1e-7 * std::max(1.0, x.norm()));

    // products of generators stay members
    for (size_t i = 0; i < gens.size(); ++i)
      for (size_t j = 0; j < gens.size(); ++j) {
        const Matrix w = gens[i] * gens[j];
        REQUIRE(verify_membership(w, bpt).residual <
                1e-7 * std::max(1.0, w.norm()));
      }
  }
}

TEST_CASE("wedderburn_unitary is unitary and block order is canonical") {
  std::mt19937 rng(35);
  const std::vector<Matrix> gens{
      random_hermitian_with_spectrum(8, {0.0, 1.0}, rng),
      random_hermitian_with_spectrum(8, {0.0, 1.0, 2.0}, rng)};
  const auto bpt = bpt_from_network(decompose_generators(gens));
  const Matrix w = wedderburn_unitary(bpt);
  CHECK((w * w.adjoint() - Matrix::Identity(8, 8)).norm() < 1e-10);
  CHECK((w.adjoint() * w - Matrix::Identity(8, 8)).norm() < 1e-10);
  for (size_t q = 1; q < bpt.blocks.size(); ++q) {
    const auto& prev = bpt.blocks[q - 1];
    const auto& cur = bpt.blocks[q];
    const bool ordered = prev.cols < cur.cols ||
                         (prev.cols == cur.cols && prev.rows <= cur.rows);
    CHECK(ordered);
  }
}
