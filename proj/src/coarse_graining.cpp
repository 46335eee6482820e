#include "irrep/coarse_graining.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "irrep/linalg.hpp"
#include "irrep/reduction.hpp"

namespace irrep {

void validate(const PartialBipartitionTable& pbpt, double tol) {
  if (pbpt.dim <= 0 || pbpt.rows <= 0 || pbpt.cols <= 0)
    throw DimensionMismatch("validate: non-positive table shape");
  std::set<std::pair<int, int>> seen;
  std::vector<bool> row_hit(pbpt.rows, false), col_hit(pbpt.cols, false);
  for (const auto& cell : pbpt.cells) {
    if (cell.row < 0 || cell.row >= pbpt.rows || cell.col < 0 ||
        cell.col >= pbpt.cols)
      throw DimensionMismatch("validate: cell label out of range");
    if (cell.state.size() != pbpt.dim)
      throw DimensionMismatch("validate: cell vector has the wrong dimension");
    if (!seen.insert({cell.row, cell.col}).second)
      throw DimensionMismatch("validate: duplicate cell position");
    row_hit[cell.row] = true;
    col_hit[cell.col] = true;
  }
  for (int i = 0; i < pbpt.rows; ++i)
    if (!row_hit[i]) throw NotFullySupported("validate: empty row");
  for (int k = 0; k < pbpt.cols; ++k)
    if (!col_hit[k]) throw NotFullySupported("validate: empty column");
  for (size_t a = 0; a < pbpt.cells.size(); ++a)
    for (size_t b = a; b < pbpt.cells.size(); ++b) {
      const Complex g = pbpt.cells[a].state.adjoint() * pbpt.cells[b].state;
      const double want = a == b ? 1.0 : 0.0;
      if (std::abs(g - want) > tol)
        throw NotIsometry("validate: cell vectors are not orthonormal");
    }
}

PartialBipartitionTable transpose(const PartialBipartitionTable& pbpt) {
  PartialBipartitionTable out;
  out.dim = pbpt.dim;
  out.rows = pbpt.cols;
  out.cols = pbpt.rows;
  for (const auto& cell : pbpt.cells)
    out.cells.push_back({cell.col, cell.row, cell.state});
  return out;
}

OperatorSystemBasis skl_from_partial_bpt(const PartialBipartitionTable& pbpt) {
  validate(pbpt);
  // row -> column -> cell vector
  std::map<std::pair<int, int>, const Vector*> at;
  for (const auto& cell : pbpt.cells) at[{cell.row, cell.col}] = &cell.state;

  OperatorSystemBasis basis;
  basis.dim = pbpt.dim;
  basis.cols = pbpt.cols;
  for (int k = 0; k < pbpt.cols; ++k) {
    for (int l = 0; l < pbpt.cols; ++l) {
      Matrix op = Matrix::Zero(pbpt.dim, pbpt.dim);
      int common = 0;
      for (int i = 0; i < pbpt.rows; ++i) {
        const auto ik = at.find({i, k});
        const auto il = at.find({i, l});
        if (ik == at.end() || il == at.end()) continue;
        op += (*ik->second) * il->second->adjoint();
        ++common;
      }
      if (common == 0) continue;
      basis.entries[{k, l}] = std::move(op);
      basis.norms[{k, l}] = common;
    }
  }
  return basis;
}

Matrix trace_out_partial(const Matrix& rho, const PartialBipartitionTable& pbpt,
                         Side keep) {
  if (rho.rows() != pbpt.dim || rho.cols() != pbpt.dim)
    throw DimensionMismatch("trace_out_partial: state dimension mismatch");
  if (keep == Side::rows) return trace_out_partial(rho, transpose(pbpt), Side::cols);

  const OperatorSystemBasis basis = skl_from_partial_bpt(pbpt);
  Matrix out = Matrix::Zero(pbpt.cols, pbpt.cols);
  for (const auto& [key, op] : basis.entries)
    out(key.second, key.first) = (op * rho).trace();
  validate_density(out, 1e-8);
  return out;
}

Matrix push_forward(const Matrix& reduced_op, const OperatorSystemBasis& basis) {
  if (reduced_op.rows() != basis.cols || reduced_op.cols() != basis.cols)
    throw DimensionMismatch("push_forward: operator dimension mismatch");
  Matrix out = Matrix::Zero(basis.dim, basis.dim);
  for (const auto& [key, op] : basis.entries)
    out += reduced_op(key.first, key.second) * op;
  return out;
}

PullBack pull_back(const Matrix& ambient_op, const OperatorSystemBasis& basis) {
  if (ambient_op.rows() != basis.dim || ambient_op.cols() != basis.dim)
    throw DimensionMismatch("pull_back: operator dimension mismatch");
  PullBack out;
  out.reduced_op = Matrix::Zero(basis.cols, basis.cols);
  for (const auto& [key, op] : basis.entries)
    out.reduced_op(key.first, key.second) =
        hs_inner(op, ambient_op) / double(basis.norms.at(key));
  out.residual = (ambient_op - push_forward(out.reduced_op, basis)).norm();
  return out;
}

std::vector<DistortionRow> probability_distortion(
    const Matrix& observable, const OperatorSystemBasis& basis,
    const Matrix& rho, double gate) {
  const PullBack pb = pull_back(observable, basis);
  const double scale = std::max(observable.norm(), 1e-300);
  if (pb.residual > gate * scale) {
    std::ostringstream os;
    os << "probability_distortion: observable outside the spanned system "
       << "(relative residual " << pb.residual / scale << ")";
    throw NotInSpan(os.str());
  }

  // reduced state straight from the basis operators
  Matrix reduced_state = Matrix::Zero(basis.cols, basis.cols);
  for (const auto& [key, op] : basis.entries)
    reduced_state(key.second, key.first) = (op * rho).trace();

  const auto ambient_comps = spectral_projections(observable);
  const auto reduced_comps = spectral_projections(
      Matrix((pb.reduced_op + pb.reduced_op.adjoint()) / 2.0));

  std::vector<DistortionRow> report;
  for (const auto& comp : ambient_comps) {
    DistortionRow row;
    row.outcome = comp.value;
    row.ambient = std::real((comp.projection * rho).trace());
    for (const auto& rcomp : reduced_comps) {
      if (std::abs(rcomp.value - comp.value) <=
          1e-8 * std::max(1.0, std::abs(comp.value)))
        row.reduced += std::real((rcomp.projection * reduced_state).trace());
    }
    row.difference = row.reduced - row.ambient;
    report.push_back(row);
  }
  return report;
}

}  // namespace irrep
