#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "irrep/reduction.hpp"

using namespace irrep;

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

// the doubled-qubit table used throughout: the algebra acts on the second
// factor only, so the first factor is pure multiplicity
BipartitionTable doubled_qubit_table() {
  const Matrix gx = kron(Matrix::Identity(2, 2), pauli_x());
  const Matrix gz = kron(Matrix::Identity(2, 2), pauli_z());
  return bpt_from_network(decompose_generators({gx, gz}));
}

Matrix random_density(int d, std::mt19937& rng) {
  const Matrix g = testutil::random_ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

std::vector<double> eigenvalues_of(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

}  // namespace

TEST_CASE("validate_density accepts states and rejects non-states") {
  std::mt19937 rng(41);
  validate_density(random_density(4, rng));
  CHECK_THROWS_AS(validate_density(Matrix::Identity(3, 3)), Error);
  Matrix neg = Matrix::Zero(2, 2);
  neg.diagonal() << 1.5, -0.5;
  CHECK_THROWS_AS(validate_density(neg), Error);
  Matrix nh = Matrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  nh(0, 0) = 1.0;
  CHECK_THROWS_AS(validate_density(nh), NonHermitianInput);
}

TEST_CASE("partial_trace recovers marginals of product states") {
  std::mt19937 rng(42);
  const Matrix a = random_density(2, rng);
  const Matrix b = random_density(3, rng);
  const Matrix rho = kron(a, b);
  CHECK((partial_trace(rho, 2, 3, true) - b).norm() < 1e-12);
  CHECK((partial_trace(rho, 2, 3, false) - a).norm() < 1e-12);
  CHECK(std::abs(partial_trace(rho, 2, 3, true).trace().real() - 1.0) < 1e-12);
  CHECK_THROWS_AS(partial_trace(rho, 2, 4, true), DimensionMismatch);
}

TEST_CASE("reduce_hamiltonian keeps the spectrum of the acting factor") {
  const auto bpt = doubled_qubit_table();
  const Matrix a = 0.7 * pauli_x() + 1.3 * pauli_z();
  const Matrix h = kron(Matrix::Identity(2, 2), a);
  const auto red = reduce_hamiltonian(h, bpt);
  REQUIRE(red.blocks.size() == 1);
  REQUIRE(red.blocks[0].rows() == 2);
  CHECK(red.residual < 1e-9);

  auto expect = eigenvalues_of(a);
  auto got = eigenvalues_of(red.blocks[0]);
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-10));
}

TEST_CASE("reduce_hamiltonian rejects operators outside the algebra") {
  const auto bpt = doubled_qubit_table();
  CHECK_THROWS_AS(reduce_hamiltonian(kron(pauli_z(), Matrix::Identity(2, 2)), bpt),
                  NotInAlgebra);
  CHECK_THROWS_AS(reduce_hamiltonian(kron(pauli_x(), pauli_x()), bpt),
                  NotInAlgebra);
}

TEST_CASE("block evolution matches full evolution for members") {
  std::mt19937 rng(43);
  const auto bpt = doubled_qubit_table();
  const Matrix a = testutil::random_hermitian(2, rng);
  const Matrix h = kron(Matrix::Identity(2, 2), a);
  const auto red = reduce_hamiltonian(h, bpt);
  const Matrix w = wedderburn_unitary(bpt);
  for (double t : {0.3, 1.7}) {
    const Matrix lhs = w * evolve(h, t) * w.adjoint();
    const Matrix rhs =
        kron(Matrix::Identity(2, 2), evolve(red.blocks[0], t));
    CHECK((lhs - rhs).norm() < 1e-9);
  }
}

TEST_CASE("the maximally mixed state reduces to scaled identities") {
  std::mt19937 rng(44);
  const std::vector<Matrix> gens{
      testutil::random_hermitian_with_spectrum(8, {0.0, 1.0}, rng),
      testutil::random_hermitian_with_spectrum(8, {0.0, 1.0, 2.0}, rng)};
  const auto bpt = bpt_from_network(decompose_generators(gens));
  const Matrix mixed = Matrix::Identity(8, 8) / 8.0;
  const auto reduced = reduce_state(mixed, bpt);
  REQUIRE(reduced.size() == bpt.blocks.size());
  for (size_t q = 0; q < reduced.size(); ++q) {
    const double weight = double(bpt.blocks[q].rows) / 8.0;
    const Matrix expect =
        weight * Matrix::Identity(bpt.blocks[q].cols, bpt.blocks[q].cols);
    CHECK((reduced[q] - expect).norm() < 1e-10);
  }
}

TEST_CASE("pure and density reductions agree and behave like states") {
  std::mt19937 rng(45);
  const auto bpt = doubled_qubit_table();
  for (int trial = 0; trial < 10; ++trial) {
    const Vector psi = testutil::random_state(4, rng);
    const Matrix rho = psi * psi.adjoint();
    const auto via_vec = reduce_state(psi, bpt);
    const auto via_rho = reduce_state(rho, bpt);
    REQUIRE(via_vec.size() == via_rho.size());
    double total = 0.0;
    for (size_t q = 0; q < via_vec.size(); ++q) {
      CHECK((via_vec[q] - via_rho[q]).norm() < 1e-12);
      CHECK((via_vec[q] - via_vec[q].adjoint()).norm() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Matrix> es(via_vec[q]);
      CHECK(es.eigenvalues().minCoeff() > -1e-10);
      total += via_vec[q].trace().real();
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("expectations factor through the reduction") {
  // tr(a rho) computed two ways: directly, and as the block pairing between
  // the reduced operator and the reduced state
  std::mt19937 rng(46);
  const std::vector<Matrix> gens{
      testutil::random_hermitian_with_spectrum(6, {0.0, 1.0}, rng),
      testutil::random_hermitian_with_spectrum(6, {-1.0, 0.0, 1.0}, rng)};
  const auto bpt = bpt_from_network(decompose_generators(gens));
  const Matrix member =
      gens[0] + 0.4 * gens[1] + 0.2 * (gens[0] * gens[1] + gens[1] * gens[0]);
  const auto red_op = reduce_hamiltonian(member, bpt);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix rho = random_density(6, rng);
    const auto red_state = reduce_state(rho, bpt);
    Complex paired = 0.0;
    for (size_t q = 0; q < red_op.blocks.size(); ++q)
      paired += (red_op.blocks[q] * red_state[q]).trace();
    const Complex direct = (member * rho).trace();
    CHECK(std::abs(paired - direct) < 1e-10);
  }
}

TEST_CASE("split_symmetry averages over the generated group") {
  std::mt19937 rng(47);
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = 1.0;
  swap(1, 2) = 1.0;
  swap(2, 1) = 1.0;
  swap(3, 3) = 1.0;
  const Matrix h = testutil::random_hermitian(4, rng);
  const auto split = split_symmetry(h, {swap});
  CHECK(split.group_size == 2);
  CHECK((split.symmetric + split.remainder - h).norm() < 1e-12);
  CHECK((swap * split.symmetric - split.symmetric * swap).norm() < 1e-10);
  // averaging is idempotent
  const auto again = split_symmetry(split.symmetric, {swap});
  CHECK((again.symmetric - split.symmetric).norm() < 1e-10);
  CHECK(again.remainder.norm() < 1e-10);
}

TEST_CASE("split_symmetry rejects non-closing and non-unitary inputs") {
  std::mt19937 rng(48);
  const double th = 1.0;  // irrational multiple of pi: powers never close
  Matrix rot = Matrix::Zero(2, 2);
  rot(0, 0) = std::cos(th);
  rot(0, 1) = -std::sin(th);
  rot(1, 0) = std::sin(th);
  rot(1, 1) = std::cos(th);
  const Matrix h = testutil::random_hermitian(2, rng);
  CHECK_THROWS_AS(split_symmetry(h, {rot}), NotAGroup);
  CHECK_THROWS_AS(split_symmetry(h, {2.0 * Matrix::Identity(2, 2)}), NotAGroup);
  CHECK_THROWS_AS(split_symmetry(h, {}), EmptyGeneratorSet);
}

TEST_CASE("purity_series equals the partial-trace oracle on a product table") {
  std::mt19937 rng(49);
  const auto bpt = doubled_qubit_table();
  const Matrix a = testutil::random_hermitian(2, rng);
  const Matrix h = kron(Matrix::Identity(2, 2), a) +
                   kron(pauli_z(), Matrix::Identity(2, 2)) +
                   0.8 * kron(pauli_z(), pauli_x());
  const Vector psi = testutil::random_state(4, rng);
  const std::vector<double> times{0.0, 0.4, 1.1, 2.9};

  const auto series = purity_series(h, psi, bpt, times);
  REQUIRE(series.size() == times.size());
  // a product state starts at unit purity; a generic state need not
  const Vector product = kron(Matrix(testutil::random_state(2, rng)),
                              Matrix(testutil::random_state(2, rng)))
                             .col(0);
  CHECK(purity_series(h, product, bpt, {0.0})[0] ==
        doctest::Approx(1.0).epsilon(1e-10));
  for (size_t s = 0; s < times.size(); ++s) {
    // oracle: evolve densely, trace out the multiplicity factor, square
    const Matrix u = evolve(h, times[s]);
    const Vector evolved = u * psi;
    const Matrix marginal =
        partial_trace(Matrix(evolved * evolved.adjoint()), 2, 2, true);
    const double oracle = (marginal * marginal).trace().real();
    CHECK(series[s] == doctest::Approx(oracle).epsilon(1e-10));
  }

  // density-operator route agrees with the pure route
  const auto via_rho =
      purity_series(h, Matrix(psi * psi.adjoint()), bpt, times);
  for (size_t s = 0; s < times.size(); ++s)
    CHECK(series[s] == doctest::Approx(via_rho[s]).epsilon(1e-10));
}

TEST_CASE("factorization_residual certifies independent factor evolution") {
  std::mt19937 rng(50);
  const auto bpt = doubled_qubit_table();
  const Matrix a = testutil::random_hermitian(2, rng);
  const Matrix b = testutil::random_hermitian(2, rng);
  const Matrix h_rows = kron(b, Matrix::Identity(2, 2));
  const Matrix h_cols = kron(Matrix::Identity(2, 2), a);
  const Matrix h = h_rows + h_cols;
  for (double t : {0.1, 1.0, 10.0})
    CHECK(factorization_residual(h, h_rows, h_cols, bpt, t) < 1e-8);

  // a genuine coupling breaks the factorization at generic times
  const Matrix coupled = h + 0.5 * kron(pauli_x(), pauli_x());
  CHECK(factorization_residual(coupled, h_rows, h_cols, bpt, 1.0) > 1e-2);
}
