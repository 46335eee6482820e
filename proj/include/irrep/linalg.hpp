#pragma once

#include <functional>
#include <vector>

#include "irrep/types.hpp"

namespace irrep {

// one eigenvalue cluster of a hermitian operator
struct SpectralComponent {
  double value;       // representative eigenvalue (cluster mean)
  Matrix projection;  // orthogonal projection onto the cluster eigenspace
  int rank;           // cluster multiplicity
  bool is_zero;       // |value| below the zero threshold
};

// hilbert-schmidt inner product tr(A^dag B)
Complex hs_inner(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol);

// full spectral resolution with deterministic ordering: clusters sorted by
// descending eigenvalue, single-linkage clustering at tol.cluster_gap(|M|_2)
std::vector<SpectralComponent> spectral_projections(const Matrix& m,
                                                    const Tolerances& tol = {});

// rescale a product of projections to a partial isometry whose support has the
// same rank as the reference projection; rejects inputs that are not a single
// scaled isometry
Matrix normalize_to_isometry(const Matrix& s_tilde, const Matrix& reference,
                             double reject_tol = 1e-6);

// snap a nearly idempotent hermitian matrix to an exact orthogonal projection
Matrix projection_round(const Matrix& p, const Tolerances& tol = {});

// deterministic orthonormal basis for the range of an orthogonal projection,
// columns phase-fixed (largest-magnitude entry made positive real)
Matrix range_basis(const Matrix& p, int expected_rank, const Tolerances& tol = {});

// phase convention applied column-wise: the entry of largest magnitude
// (lowest index on near-ties) is rotated to the positive real axis
void fix_phases(Matrix& columns);

// integer rank of a projection via its trace; rejects drift beyond 1e-6
int projection_rank(const Matrix& p);

// unitary evolution exp(-i t H) of a hermitian generator
Matrix evolve(const Matrix& h, double t);

// kronecker product helper
Matrix kron(const Matrix& a, const Matrix& b);

// run f(i) for i in [0, n) on up to IRREP_SCATTER_THREADS workers;
// results must be written to preallocated slots to stay deterministic
void parallel_for(int n, const std::function<void(int)>& f);

}  // namespace irrep
