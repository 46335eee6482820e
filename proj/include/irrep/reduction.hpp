#pragma once

#include <vector>

#include "irrep/bipartition.hpp"
#include "irrep/types.hpp"

namespace irrep {

// hermitian, unit trace, no eigenvalue below -tol
void validate_density(const Matrix& rho, double tol = 1e-10);

// standard bipartite partial trace for a dim_first * dim_second system laid
// out in row-major factor order
Matrix partial_trace(const Matrix& rho, int dim_first, int dim_second,
                     bool trace_out_first);

struct ReducedHamiltonian {
  std::vector<Matrix> blocks;  // one cols x cols matrix per table block
  double residual = 0.0;       // membership residual of the input
  double cross_row = 0.0;
};

// compress an algebra member to a single copy per block; the input must pass
// the membership gate relative to its own norm
ReducedHamiltonian reduce_hamiltonian(const Matrix& h,
                                      const BipartitionTable& bpt,
                                      double gate = 1e-6);

// expectation table per block: entry (l, k) is the trace of S_kl against rho
std::vector<Matrix> reduce_state(const Matrix& rho,
                                 const BipartitionTable& bpt);
std::vector<Matrix> reduce_state(const Vector& psi,
                                 const BipartitionTable& bpt);

// split an operator into the average over the group generated by the given
// unitaries plus the remainder
struct SymmetrySplit {
  Matrix symmetric;  // commutes with every element of the generated group
  Matrix remainder;  // input minus the symmetric part
  int group_size = 0;
};

SymmetrySplit split_symmetry(const Matrix& h,
                             const std::vector<Matrix>& group_generators,
                             double tol = 1e-8);

// how far exp(-i t h) is from evolving the row and column factors of every
// block independently with h_rows (a commutant member) and h_cols (a member)
double factorization_residual(const Matrix& h, const Matrix& h_rows,
                              const Matrix& h_cols,
                              const BipartitionTable& bpt, double t);

// purity of the reduced state along the evolution generated by h
std::vector<double> purity_series(const Matrix& h, const Matrix& rho0,
                                  const BipartitionTable& bpt,
                                  const std::vector<double>& times);
std::vector<double> purity_series(const Matrix& h, const Vector& psi0,
                                  const BipartitionTable& bpt,
                                  const std::vector<double>& times);

}  // namespace irrep
