#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "irrep/linalg.hpp"

using namespace irrep;
using testutil::random_hermitian;
using testutil::random_projection;
using testutil::random_unitary;

TEST_CASE("hs_inner matches the explicit entrywise sum") {
  std::mt19937 rng(11);
  const Matrix a = testutil::random_ginibre(5, 5, rng);
  const Matrix b = testutil::random_ginibre(5, 5, rng);
  Complex manual = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) manual += std::conj(a(i, j)) * b(i, j);
  CHECK(std::abs(hs_inner(a, b) - manual) < 1e-12);
  CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) < 1e-12);
  CHECK_THROWS_AS(hs_inner(a, Matrix::Zero(4, 4)), DimensionMismatch);
}

TEST_CASE("spectral_projections resolves a random hermitian matrix") {
  std::mt19937 rng(12);
  const Matrix m = random_hermitian(9, rng);
  const auto comps = spectral_projections(m);

  Matrix rebuilt = Matrix::Zero(9, 9);
  Matrix total = Matrix::Zero(9, 9);
  for (const auto& c : comps) {
    rebuilt += c.value * c.projection;
    total += c.projection;
    CHECK((c.projection * c.projection - c.projection).norm() < 1e-10);
    CHECK((c.projection - c.projection.adjoint()).norm() < 1e-12);
    CHECK(c.rank == projection_rank(c.projection));
  }
  CHECK((rebuilt - m).norm() < 1e-9 * m.norm());
  CHECK((total - Matrix::Identity(9, 9)).norm() < 1e-10);
  for (size_t i = 1; i < comps.size(); ++i) {
    CHECK(comps[i - 1].value > comps[i].value);
    CHECK((comps[i - 1].projection * comps[i].projection).norm() < 1e-10);
  }
}

TEST_CASE("spectral_projections respects degeneracy and flags zero") {
  Matrix m = Matrix::Zero(6, 6);
  m.diagonal() << 2, 2, 1, 0, 0, 0;
  const auto comps = spectral_projections(m);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].value == doctest::Approx(2.0));
  CHECK(comps[0].rank == 2);
  CHECK(!comps[0].is_zero);
  CHECK(comps[1].value == doctest::Approx(1.0));
  CHECK(comps[1].rank == 1);
  CHECK(comps[2].rank == 3);
  CHECK(comps[2].is_zero);
}

TEST_CASE("spectral_projections clusters nearly equal eigenvalues") {
  Matrix m = Matrix::Zero(3, 3);
  m.diagonal() << 1.0, 1.0 + 1e-12, 0.0;
  const auto comps = spectral_projections(m);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].rank == 2);
  CHECK(comps[1].is_zero);
}

TEST_CASE("spectral_projections rejects non-hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(spectral_projections(m), NonHermitianInput);
}

TEST_CASE("normalize_to_isometry rescales a scaled partial isometry") {
  std::mt19937 rng(13);
  const int d = 6, r = 2;
  const Matrix u = random_unitary(d, rng);
  const Matrix v = random_unitary(d, rng);
  const Matrix s = u.leftCols(r) * v.leftCols(r).adjoint();
  const Matrix ref = v.leftCols(r) * v.leftCols(r).adjoint();

  const Matrix out = normalize_to_isometry(3.7 * s, ref);
  CHECK((out - s).norm() < 1e-12);
  CHECK((out.adjoint() * out - ref).norm() < 1e-12);

  CHECK_THROWS_AS(normalize_to_isometry(Matrix::Zero(d, d), ref), ZeroOperator);

  Matrix skew = Matrix::Zero(2, 2);
  skew.diagonal() << 1.0, 2.0;
  CHECK_THROWS_AS(normalize_to_isometry(skew, Matrix::Identity(2, 2)),
                  NotIsometry);
}

TEST_CASE("projection_round repairs small hermitian noise") {
  std::mt19937 rng(14);
  const Matrix p = random_projection(7, 3, rng);
  const Matrix noisy = p + 1e-9 * random_hermitian(7, rng);
  const Matrix rounded = projection_round(noisy);
  CHECK((rounded * rounded - rounded).norm() < 1e-12);
  CHECK(projection_rank(rounded) == 3);
  CHECK((rounded - p).norm() < 1e-7);
  // an exact projection passes through unchanged
  CHECK((projection_round(p) - p).norm() < 1e-12);
}

TEST_CASE("range_basis spans the projection with pinned phases") {
  std::mt19937 rng(15);
  const Matrix p = random_projection(6, 2, rng);
  const Matrix basis = range_basis(p, 2);
  CHECK((basis.adjoint() * basis - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((basis * basis.adjoint() - p).norm() < 1e-10);
  CHECK_THROWS_AS(range_basis(p, 3), NotIsometry);
  for (int j = 0; j < basis.cols(); ++j) {
    int arg = 0;
    for (int i = 1; i < basis.rows(); ++i)
      if (std::abs(basis(i, j)) > std::abs(basis(arg, j)) * (1.0 + 1e-9))
        arg = i;
    CHECK(std::abs(std::imag(basis(arg, j))) < 1e-12);
    CHECK(std::real(basis(arg, j)) > 0.0);
  }
}

TEST_CASE("fix_phases makes a column set phase-invariant") {
  std::mt19937 rng(16);
  Matrix a = testutil::random_ginibre(5, 3, rng);
  for (int j = 0; j < 3; ++j) a.col(j) /= a.col(j).norm();
  Matrix b = a;
  b.col(0) *= std::polar(1.0, 0.9);
  b.col(2) *= std::polar(1.0, -2.1);
  fix_phases(a);
  fix_phases(b);
  CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("projection_rank counts and guards") {
  std::mt19937 rng(17);
  const Matrix p = random_projection(5, 2, rng);
  CHECK(projection_rank(p) == 2);
  CHECK_THROWS_AS(projection_rank(1.3 * p), NotIsometry);
}

TEST_CASE("evolve produces the right one-parameter unitary") {
  Matrix sz = Matrix::Zero(2, 2);
  sz.diagonal() << 1.0, -1.0;
  const double t = 0.83;
  const Matrix u = evolve(sz, t);
  CHECK(std::abs(u(0, 0) - std::polar(1.0, -t)) < 1e-12);
  CHECK(std::abs(u(1, 1) - std::polar(1.0, t)) < 1e-12);
  CHECK(std::abs(u(0, 1)) < 1e-14);
  CHECK((u * u.adjoint() - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((evolve(sz, 0.0) - Matrix::Identity(2, 2)).norm() < 1e-14);

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(evolve(bad, 1.0), NonHermitianInput);
}

TEST_CASE("kron lays out blocks in row-major factor order") {
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  const Matrix k = kron(sx, Matrix::Identity(2, 2));
  REQUIRE(k.rows() == 4);
  CHECK(std::abs(k(0, 2) - 1.0) < 1e-15);
  CHECK(std::abs(k(1, 3) - 1.0) < 1e-15);
  CHECK(std::abs(k(0, 1)) < 1e-15);
}

TEST_CASE("parallel_for covers the index range exactly once") {
  std::vector<int> hits(257, 0);
  parallel_for(257, [&](int i) { hits[i] += i; });
  for (int i = 0; i < 257; ++i) CHECK(hits[i] == i);
  parallel_for(0, [&](int) { CHECK(false); });
}
