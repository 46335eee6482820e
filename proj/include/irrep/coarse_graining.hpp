#pragma once

#include <map>
#include <utility>
#include <vector>

#include "irrep/bipartition.hpp"
#include "irrep/types.hpp"

namespace irrep {

// one occupied cell of a ragged table: an ambient unit vector tagged with its
// row and column labels
struct PbptCell {
  int row = 0;
  int col = 0;
  Vector state;
};

struct PartialBipartitionTable {
  int dim = 0;   // ambient dimension
  int rows = 0;  // row label count
  int cols = 0;  // column label count
  std::vector<PbptCell> cells;
};

// cells orthonormal, labels in range, no duplicate positions, and every row
// and column occupied at least once
void validate(const PartialBipartitionTable& pbpt, double tol = 1e-8);

PartialBipartitionTable transpose(const PartialBipartitionTable& pbpt);

// the column-pair operators S_kl built from rows common to both columns;
// pairs with no common rows are omitted
struct OperatorSystemBasis {
  int dim = 0;   // ambient dimension
  int cols = 0;  // reduced-side dimension
  std::map<std::pair<int, int>, Matrix> entries;  // (k, l) -> S_kl
  std::map<std::pair<int, int>, int> norms;       // (k, l) -> |common rows|
};

OperatorSystemBasis skl_from_partial_bpt(const PartialBipartitionTable& pbpt);

// which label set the reduced state lives on
enum class Side { rows, cols };

// reduced state over the kept side: entry (l, k) is the trace of S_kl
// against rho (the row side goes through the transposed table); the output
// is certified as a density operator
Matrix trace_out_partial(const Matrix& rho, const PartialBipartitionTable& pbpt,
                         Side keep);

// embed a reduced-side operator into the ambient space
Matrix push_forward(const Matrix& reduced_op, const OperatorSystemBasis& basis);

// best reduced-side description of an ambient operator plus the leftover
struct PullBack {
  Matrix reduced_op;
  double residual = 0.0;  // distance from the span of the S_kl
};

PullBack pull_back(const Matrix& ambient_op, const OperatorSystemBasis& basis);

// ambient vs reduced outcome probability for every eigenvalue of the
// observable; requires the observable to sit in the span of the S_kl
struct DistortionRow {
  double outcome = 0.0;
  double ambient = 0.0;
  double reduced = 0.0;
  double difference = 0.0;  // reduced minus ambient
};

std::vector<DistortionRow> probability_distortion(
    const Matrix& observable, const OperatorSystemBasis& basis,
    const Matrix& rho, double gate = 1e-6);

}  // namespace irrep
