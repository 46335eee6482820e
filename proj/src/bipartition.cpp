#include "irrep/bipartition.hpp"

#include <algorithm>
#include <cmath>

namespace irrep {

void validate(const BipartitionTable& bpt, double tol) {
  if (bpt.dim <= 0) throw DimensionMismatch("validate: non-positive dimension");
  int covered = 0;
  for (const auto& block : bpt.blocks) {
    if (block.rows <= 0 || block.cols <= 0)
      throw DimensionMismatch("validate: non-positive block shape");
    if (block.basis.rows() != bpt.dim ||
        block.basis.cols() != block.rows * block.cols)
      throw DimensionMismatch("validate: basis shape mismatch");
    const Matrix gram = block.basis.adjoint() * block.basis;
    if ((gram - Matrix::Identity(gram.rows(), gram.cols())).norm() > tol)
      throw NotIsometry("validate: block basis is not orthonormal");
    covered += block.rows * block.cols;
  }
  if (covered != bpt.dim)
    throw NotFullySupported("validate: blocks do not exhaust the space");
  // cross-block orthogonality
  for (size_t a = 0; a < bpt.blocks.size(); ++a)
    for (size_t b = a + 1; b < bpt.blocks.size(); ++b)
      if ((bpt.blocks[a].basis.adjoint() * bpt.blocks[b].basis).norm() > tol)
        throw NotIsometry("validate: blocks overlap");
}

BipartitionTable bpt_from_network(const ReflectionNetwork& net,
                                  const Tolerances& tol) {
  struct Keyed {
    int cols, rows, first_id;
    BptBlock block;
  };
  std::vector<Keyed> keyed;

  for (const auto& comp : net.components()) {
    const std::vector<int> selected = maximal_orthogonal_set(net, comp);
    const int cols = static_cast<int>(selected.size());
    const int rows = net.vertex(selected.front()).rank;
    const ComponentTree tree = component_tree(net, comp, tol);

    // transport the reference cell basis into every selected column
    const int ref = selected.front();
    const Matrix ref_basis = range_basis(net.vertex(ref).projection, rows, tol);
    BptBlock block;
    block.rows = rows;
    block.cols = cols;
    block.basis = Matrix::Zero(net.dim(), rows * cols);
    for (int k = 0; k < cols; ++k) {
      const Matrix transport =
          tree.carrier.at(selected[k]) * tree.carrier.at(ref).adjoint();
      const Matrix cell = transport * ref_basis;
      for (int i = 0; i < rows; ++i) block.basis.col(i * cols + k) = cell.col(i);
    }
    const Matrix gram = block.basis.adjoint() * block.basis;
    if ((gram - Matrix::Identity(rows * cols, rows * cols)).norm() >
        1e-8 * std::sqrt(double(rows * cols)))
      throw NotIsometry("bpt_from_network: transported cells lost orthonormality");
    keyed.push_back({cols, rows, comp.front(), std::move(block)});
  }

  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.cols != b.cols) return a.cols < b.cols;
    if (a.rows != b.rows) return a.rows < b.rows;
    return a.first_id < b.first_id;
  });

  BipartitionTable bpt;
  bpt.dim = net.dim();
  for (auto& k : keyed) bpt.blocks.push_back(std::move(k.block));
  validate(bpt);
  return bpt;
}

BipartitionTable transpose(const BipartitionTable& bpt) {
  int covered = 0;
  for (const auto& block : bpt.blocks) covered += block.rows * block.cols;
  if (covered != bpt.dim)
    throw NotFullySupported("transpose: blocks do not exhaust the space");

  BipartitionTable out;
  out.dim = bpt.dim;
  for (const auto& block : bpt.blocks) {
    BptBlock t;
    t.rows = block.cols;
    t.cols = block.rows;
    t.basis = Matrix::Zero(bpt.dim, block.rows * block.cols);
    for (int i = 0; i < block.rows; ++i)
      for (int k = 0; k < block.cols; ++k)
        t.basis.col(k * t.cols + i) = block.basis.col(i * block.cols + k);
    out.blocks.push_back(std::move(t));
  }
  return out;
}

Matrix wedderburn_unitary(const BipartitionTable& bpt) {
  Matrix cols(bpt.dim, bpt.dim);
  int at = 0;
  for (const auto& block : bpt.blocks) {
    cols.middleCols(at, block.rows * block.cols) = block.basis;
    at += block.rows * block.cols;
  }
  if (at != bpt.dim)
    throw NotFullySupported("wedderburn_unitary: blocks do not exhaust the space");
  return cols.adjoint();
}

MembershipReport verify_membership(const Matrix& a,
                                   const BipartitionTable& bpt) {
  if (a.rows() != bpt.dim || a.cols() != bpt.dim)
    throw DimensionMismatch("verify_membership: operator dimension mismatch");
  const Matrix w = wedderburn_unitary(bpt);
  Matrix t = w * a * w.adjoint();

  double cross_sq = 0.0;  // disagreement between the copies
  int at = 0;
  for (const auto& block : bpt.blocks) {
    const int m = block.cols;
    Matrix first_copy;
    for (int i = 0; i < block.rows; ++i) {
      const Matrix copy = t.block(at + i * m, at + i * m, m, m);
      if (i == 0)
        first_copy = copy;
      else
        cross_sq += (copy - first_copy).squaredNorm();
      // leave only the weight outside the repeated-copy diagonal behind
      t.block(at + i * m, at + i * m, m, m).setZero();
    }
    at += block.rows * m;
  }
  MembershipReport report;
  report.off_block = t.norm();
  report.cross_row = std::sqrt(cross_sq);
  report.residual = std::sqrt(report.off_block * report.off_block +
                              report.cross_row * report.cross_row);
  return report;
}

Matrix block_unit(const BptBlock& block, int k, int l) {
  if (k < 0 || k >= block.cols || l < 0 || l >= block.cols)
    throw DimensionMismatch("block_unit: column index out of range");
  Matrix out = Matrix::Zero(block.basis.rows(), block.basis.rows());
  for (int i = 0; i < block.rows; ++i)
    out += block.basis.col(i * block.cols + k) *
           block.basis.col(i * block.cols + l).adjoint();
  return out;
}

}  // namespace irrep
