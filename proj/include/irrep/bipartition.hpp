#pragma once

#include <vector>

#include "irrep/scattering.hpp"
#include "irrep/types.hpp"

namespace irrep {

// one irreducible sector: the algebra acts identically on `rows` copies of a
// `cols`-dimensional space; basis column i*cols + k holds the cell (i, k)
struct BptBlock {
  int rows = 0;
  int cols = 0;
  Matrix basis;  // dim x (rows*cols), orthonormal columns
};

struct BipartitionTable {
  int dim = 0;
  std::vector<BptBlock> blocks;
};

// shape checks plus orthonormality of each block basis and a full-space count
void validate(const BipartitionTable& bpt, double tol = 1e-8);

// read the table off a proper, minimal, complete network: one block per
// reflecting component, columns in greedy orthogonal-set order, cells
// transported along the component tree
BipartitionTable bpt_from_network(const ReflectionNetwork& net,
                                  const Tolerances& tol = {});

// swap the row/column roles of every block in place (the commutant's table);
// block order is preserved
BipartitionTable transpose(const BipartitionTable& bpt);

// unitary whose rows are the table's basis vectors in block order, so
// w * a * w.adjoint() is block diagonal whenever a belongs to the algebra
Matrix wedderburn_unitary(const BipartitionTable& bpt);

struct MembershipReport {
  double off_block = 0.0;  // weight outside the repeated-copy block diagonal
  double cross_row = 0.0;  // disagreement between the copies
  double residual = 0.0;   // sqrt(off_block^2 + cross_row^2)
};

MembershipReport verify_membership(const Matrix& a,
                                   const BipartitionTable& bpt);

// the operator mapping column l to column k of one block, summed over rows
Matrix block_unit(const BptBlock& block, int k, int l);

}  // namespace irrep
