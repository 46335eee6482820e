#include "irrep/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace irrep {

namespace {
constexpr double kMergeTol = 1e-8;     // lambda within this of 1 means equal pieces
constexpr double kPhaseTol = 1e-8;     // cycle consistency, scaled by sqrt(rank)
constexpr double kEqualTol = 1e-8;     // projection equality, scaled by sqrt(rank)
}  // namespace

// ---------------------------------------------------------------------------
// network plumbing
// ---------------------------------------------------------------------------

int ReflectionNetwork::add_vertex(Matrix projection) {
  Vertex v;
  v.id = static_cast<int>(vertices_.size());
  v.rank = projection_rank(projection);
  v.projection = std::move(projection);
  v.alive = true;
  vertices_.push_back(std::move(v));
  return vertices_.back().id;
}

std::vector<int> ReflectionNetwork::alive_ids() const {
  std::vector<int> out;
  for (const auto& v : vertices_)
    if (v.alive) out.push_back(v.id);
  return out;
}

std::optional<Edge> ReflectionNetwork::edge(int a, int b) const {
  auto it = edges_.find(key(a, b));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

void ReflectionNetwork::set_unknown(int a, int b) {
  auto it = edges_.find(key(a, b));
  if (it == edges_.end()) {
    Edge e;
    e.order = next_order();
    edges_[key(a, b)] = e;
  } else {
    it->second.state = EdgeState::unknown;
    it->second.coefficient = 0.0;
  }
}

void ReflectionNetwork::set_reflecting(int a, int b, double lambda) {
  auto it = edges_.find(key(a, b));
  if (it == edges_.end()) {
    Edge e;
    e.state = EdgeState::reflecting;
    e.coefficient = lambda;
    e.order = next_order();
    edges_[key(a, b)] = e;
  } else {
    it->second.state = EdgeState::reflecting;
    it->second.coefficient = lambda;
  }
}

void ReflectionNetwork::set_absent(int a, int b) { edges_.erase(key(a, b)); }

std::vector<int> ReflectionNetwork::reflecting_neighbors(int id) const {
  std::vector<int> out;
  for (const auto& [k, e] : edges_) {
    if (e.state != EdgeState::reflecting) continue;
    if (k.first == id && vertices_[k.second].alive) out.push_back(k.second);
    if (k.second == id && vertices_[k.first].alive) out.push_back(k.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> ReflectionNetwork::neighbors(int id) const {
  std::vector<int> out;
  for (const auto& [k, e] : edges_) {
    if (k.first == id && vertices_[k.second].alive) out.push_back(k.second);
    if (k.second == id && vertices_[k.first].alive) out.push_back(k.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> ReflectionNetwork::unknown_edges() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [k, e] : edges_) {
    if (e.state == EdgeState::unknown && vertices_[k.first].alive &&
        vertices_[k.second].alive)
      out.push_back(k);
  }
  return out;
}

bool ReflectionNetwork::has_unknown_edges() const {
  return !unknown_edges().empty();
}

std::vector<std::vector<int>> ReflectionNetwork::components() const {
  std::vector<std::vector<int>> out;
  std::set<int> seen;
  for (const auto& v : vertices_) {
    if (!v.alive || seen.count(v.id)) continue;
    std::vector<int> comp, stack{v.id};
    seen.insert(v.id);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int w : reflecting_neighbors(u)) {
        if (!seen.count(w)) {
          seen.insert(w);
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

void ReflectionNetwork::clear_edges_of(int id) {
  for (auto it = edges_.begin(); it != edges_.end();) {
    if (it->first.first == id || it->first.second == id)
      it = edges_.erase(it);
    else
      ++it;
  }
}

// ---------------------------------------------------------------------------
// elementary scattering of a projection pair
// ---------------------------------------------------------------------------

ScatterOutcome scatter(const Matrix& p1, const Matrix& p2,
                       const Tolerances& tol) {
  const int d = static_cast<int>(p1.rows());
  if (p2.rows() != d || p2.cols() != d || p1.cols() != d)
    throw DimensionMismatch("scatter: projection shapes differ");

  const int r1 = projection_rank(p1);
  const int r2 = projection_rank(p2);

  ScatterOutcome out;
  const Matrix m = (p1 * p2 * p1 + (p1 * p2 * p1).adjoint()) / 2.0;
  const double zero_thr = tol.zero_threshold(d);

  int matched_1 = 0, matched_2 = 0;
  for (const auto& comp : spectral_projections(m, tol)) {
    if (comp.value <= zero_thr) continue;  // null directions handled below
    double lambda = std::min(comp.value, 1.0);
    Matrix piece1 = projection_round(comp.projection, tol);
    Matrix piece2 = projection_round(p2 * piece1 * p2 / lambda, tol);
    if (projection_rank(piece2) != comp.rank)
      throw Error("scatter: matched pieces disagree in rank");
    matched_1 += comp.rank;
    matched_2 += comp.rank;
    out.coefficients.push_back(lambda);
    out.pieces_1.push_back(std::move(piece1));
    out.pieces_2.push_back(std::move(piece2));
  }

  out.null_rank_1 = r1 - matched_1;
  out.null_rank_2 = r2 - matched_2;
  if (out.null_rank_1 < 0 || out.null_rank_2 < 0)
    throw Error("scatter: matched rank exceeds the projection rank");

  auto leftover = [&](const Matrix& p, const std::vector<Matrix>& pieces,
                      int expected) {
    if (expected == 0) return Matrix(Matrix::Zero(d, d));
    Matrix n = p;
    for (const auto& piece : pieces) n -= piece;
    n = projection_round(n, tol);
    if (projection_rank(n) != expected)
      throw Error("scatter: leftover piece has the wrong rank");
    return n;
  };
  out.null_1 = leftover(p1, out.pieces_1, out.null_rank_1);
  out.null_2 = leftover(p2, out.pieces_2, out.null_rank_2);
  return out;
}

// ---------------------------------------------------------------------------
// initial network
// ---------------------------------------------------------------------------

namespace {

bool projections_equal(const Matrix& a, const Matrix& b, int rank) {
  return (a - b).norm() <= kEqualTol * std::max(1.0, std::sqrt(double(rank)));
}

}  // namespace

ReflectionNetwork build_initial_network(const std::vector<Matrix>& generators,
                                        const Tolerances& tol,
                                        bool include_identity,
                                        ScatterLog* log) {
  if (generators.empty())
    throw EmptyGeneratorSet("build_initial_network: no generators supplied");
  const int d = static_cast<int>(generators.front().rows());
  for (const auto& g : generators) {
    if (g.rows() != d || g.cols() != d)
      throw DimensionMismatch("build_initial_network: generator shapes differ");
    if (!is_hermitian(g, 1e-10 * std::max(1.0, g.norm())))
      throw NonHermitianInput("build_initial_network: generator is not hermitian");
  }

  ReflectionNetwork net;
  net.set_dim(d);

  // vertex groups, one per generator; a group member may be a vertex reused
  // from an earlier generator when the projections coincide
  std::vector<std::vector<int>> groups;
  for (const auto& g : generators) {
    std::vector<int> group;
    for (const auto& comp : spectral_projections(g, tol)) {
      if (comp.is_zero && !include_identity) continue;
      int found = -1;
      for (int v : net.alive_ids()) {
        if (net.vertex(v).rank == comp.rank &&
            projections_equal(net.vertex(v).projection, comp.projection,
                              comp.rank)) {
          found = v;
          break;
        }
      }
      group.push_back(found >= 0 ? found
                                 : net.add_vertex(projection_round(comp.projection, tol)));
    }
    groups.push_back(std::move(group));
  }

  // same-generator pieces are orthogonal: no edge; everything else unknown
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    for (size_t gj = gi; gj < groups.size(); ++gj) {
      for (int u : groups[gi]) {
        for (int v : groups[gj]) {
          if (u == v) continue;
          if (gi == gj) {
            net.set_absent(u, v);
          } else {
            // a pair already known orthogonal (sharing a generator) stays so
            bool same_family = false;
            for (const auto& grp : groups) {
              if (std::count(grp.begin(), grp.end(), u) &&
                  std::count(grp.begin(), grp.end(), v)) {
                same_family = true;
                break;
              }
            }
            if (!same_family && !net.edge(u, v)) net.set_unknown(u, v);
          }
        }
      }
    }
  }

  // rank-1 pairs resolve without a spectral call: the only candidate
  // coefficient is tr(P_u P_v)
  for (const auto& [u, v] : net.unknown_edges()) {
    if (net.vertex(u).rank != 1 || net.vertex(v).rank != 1) continue;
    const double lambda =
        std::real((net.vertex(u).projection * net.vertex(v).projection).trace());
    if (lambda <= tol.zero_threshold(d)) {
      net.set_absent(u, v);
    } else if (lambda >= 1.0 - kMergeTol) {
      // equal rank-1 projections missed by the dedup scan
      net.set_reflecting(u, v, 1.0);
    } else {
      net.set_reflecting(u, v, lambda);
    }
    if (log)
      log->note("initial rank-1 edge (" + std::to_string(u) + "," +
                std::to_string(v) + ") lambda=" + std::to_string(lambda));
  }
  return net;
}

// ---------------------------------------------------------------------------
// scattering loop
// ---------------------------------------------------------------------------

namespace {

using Queue = std::set<std::tuple<int, long, int, int>>;

void enqueue(const ReflectionNetwork& net, Queue& q, int a, int b) {
  const auto e = net.edge(a, b);
  if (!e || e->state != EdgeState::unknown) return;
  const int rank_key = std::min(net.vertex(a).rank, net.vertex(b).rank);
  q.insert({rank_key, e->order, std::min(a, b), std::max(a, b)});
}

// declare v and w one and the same vertex; the smaller id survives
void merge_vertices(ReflectionNetwork& net, int a, int b) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  // capture hi's adjacency before killing it
  std::vector<std::pair<int, Edge>> adj;
  for (int w : net.neighbors(hi)) {
    if (w == lo) continue;
    adj.push_back({w, *net.edge(hi, w)});
  }
  net.kill(hi);
  for (const auto& [w, e] : adj) {
    const auto cur = net.edge(lo, w);
    if (!cur) continue;  // lo already knows it is orthogonal to w
    if (cur->state == EdgeState::unknown && e.state == EdgeState::reflecting) {
      net.set_reflecting(lo, w, e.coefficient);
    }
    // reflecting knowledge on lo wins; unknown+unknown stays queued as-is
  }
  net.set_absent(lo, hi);
}

struct PieceRef {
  int vertex;
  int lambda_idx;  // index into coefficients, -1 for the null piece
};

void process_outcome(ReflectionNetwork& net, int a, int b,
                     const ScatterOutcome& out, Queue& q, ScatterLog* log) {
  const int k = static_cast<int>(out.coefficients.size());

  // fully orthogonal pair
  if (k == 0) {
    net.set_absent(a, b);
    if (log) log->note("  -> orthogonal");
    return;
  }

  const int pieces_1 = k + (out.null_rank_1 > 0 ? 1 : 0);
  const int pieces_2 = k + (out.null_rank_2 > 0 ? 1 : 0);
  const bool broke1 = pieces_1 > 1;
  const bool broke2 = pieces_2 > 1;
  const int merge_idx = out.coefficients[0] >= 1.0 - kMergeTol ? 0 : -1;

  // both sides whole: the pair either coincides or reflects as-is
  if (!broke1 && !broke2) {
    if (merge_idx == 0) {
      merge_vertices(net, a, b);
      if (log) log->note("  -> merged whole vertices");
    } else {
      net.set_reflecting(a, b, out.coefficients[0]);
      if (log)
        log->note("  -> reflecting lambda=" + std::to_string(out.coefficients[0]));
    }
    return;
  }

  // capture external adjacency (excluding the scattering partner)
  auto capture = [&](int id) {
    std::vector<std::pair<int, Edge>> adj;
    for (int w : net.neighbors(id)) {
      if (w == a || w == b) continue;
      adj.push_back({w, *net.edge(id, w)});
    }
    return adj;
  };
  const auto adjA = capture(a);
  const auto adjB = capture(b);
  auto present = [](const std::vector<std::pair<int, Edge>>& adj, int w) {
    for (const auto& [x, e] : adj)
      if (x == w) return true;
    return false;
  };

  if (broke1) net.kill(a);
  if (broke2) net.kill(b);

  int shared_id = -1;
  std::vector<PieceRef> side1, side2;

  auto build_side = [&](bool broke, int original, int other_original,
                        bool other_broke, const std::vector<Matrix>& pieces,
                        const Matrix& null_piece, int null_rank,
                        std::vector<PieceRef>& side, bool is_side_one) {
    if (!broke) {
      side.push_back({original, 0});
      return;
    }
    for (int i = 0; i < k; ++i) {
      int id;
      if (i == merge_idx) {
        if (!other_broke) {
          id = other_original;  // the whole partner is the equal piece
        } else if (shared_id >= 0) {
          id = shared_id;  // second visit: reuse the shared child
        } else {
          id = net.add_vertex(
              projection_round((out.pieces_1[i] + out.pieces_2[i]) / 2.0));
          shared_id = id;
        }
      } else {
        id = net.add_vertex(pieces[i]);
      }
      side.push_back({id, i});
    }
    if (null_rank > 0) side.push_back({net.add_vertex(null_piece), -1});
    (void)is_side_one;
  };

  build_side(broke1, a, b, broke2, out.pieces_1, out.null_1, out.null_rank_1,
             side1, true);
  build_side(broke2, b, a, broke1, out.pieces_2, out.null_2, out.null_rank_2,
             side2, false);

  // external inheritance: fresh children relate unknown to the parent's
  // non-absent neighbors (orthogonality descends, reflection does not); the
  // shared child needs a non-absent relation on both parents
  auto inherit = [&](const std::vector<PieceRef>& side,
                     const std::vector<std::pair<int, Edge>>& adj) {
    for (const auto& ref : side) {
      if (ref.vertex == a || ref.vertex == b) continue;  // unbroken original
      for (const auto& [w, e] : adj) {
        if (!net.vertex(w).alive) continue;
        if (ref.vertex == shared_id) {
          if (!(present(adjA, w) && present(adjB, w))) continue;
        }
        net.set_unknown(ref.vertex, w);
        enqueue(net, q, ref.vertex, w);
        (void)e;
      }
    }
  };
  if (broke1) inherit(side1, adjA);
  if (broke2) inherit(side2, adjB);

  // an unbroken original equal to a piece of the shattered partner is
  // contained in the partner, so the partner's known-orthogonal neighbors
  // resolve its unknown edges
  auto tighten_contained = [&](int original,
                               const std::vector<std::pair<int, Edge>>& partner_adj) {
    for (int w : net.neighbors(original)) {
      const auto e = net.edge(original, w);
      if (e && e->state == EdgeState::unknown && !present(partner_adj, w))
        net.set_absent(original, w);
    }
  };
  if (!broke1 && merge_idx == 0) tighten_contained(a, adjB);
  if (!broke2 && merge_idx == 0) tighten_contained(b, adjA);

  // cross edges between the two piece lists
  for (const auto& r1 : side1) {
    for (const auto& r2 : side2) {
      if (r1.vertex == r2.vertex) continue;
      if (r1.lambda_idx >= 0 && r1.lambda_idx == r2.lambda_idx) {
        net.set_reflecting(r1.vertex, r2.vertex,
                           out.coefficients[r1.lambda_idx]);
      }
      // otherwise orthogonal: no edge
    }
  }

  if (log) {
    std::ostringstream os;
    os << "  -> pieces " << pieces_1 << "/" << pieces_2 << " lambdas [";
    for (int i = 0; i < k; ++i) os << (i ? " " : "") << out.coefficients[i];
    os << "]";
    log->note(os.str());
  }
}

}  // namespace

void scatter_until_proper(ReflectionNetwork& net, const Tolerances& tol,
                          ScatterLog* log) {
  Queue q;
  for (const auto& [x, y] : net.unknown_edges()) enqueue(net, q, x, y);

  const long cap = std::max(10L * net.dim() * net.dim(), 50L);
  long performed = 0;
  while (!q.empty()) {
    const auto [rank_key, order, x, y] = *q.begin();
    q.erase(q.begin());
    (void)rank_key;
    (void)order;
    const auto e = net.edge(x, y);
    if (!e || e->state != EdgeState::unknown) continue;
    if (!net.vertex(x).alive || !net.vertex(y).alive) continue;
    if (++performed > cap)
      throw NonTermination("scatter_until_proper: iteration cap exceeded");
    if (log) {
      ++log->scatter_count;
      log->note("scatter (" + std::to_string(x) + "," + std::to_string(y) +
                ") ranks " + std::to_string(net.vertex(x).rank) + "/" +
                std::to_string(net.vertex(y).rank));
    }
    const ScatterOutcome out =
        scatter(net.vertex(x).projection, net.vertex(y).projection, tol);
    process_outcome(net, x, y, out, q, log);
  }
  if (net.has_unknown_edges())
    throw Error("scatter_until_proper: unknown edges remain after drain");
}

// ---------------------------------------------------------------------------
// spanning trees and path isometries
// ---------------------------------------------------------------------------

ComponentTree component_tree(const ReflectionNetwork& net,
                             const std::vector<int>& component,
                             const Tolerances& tol) {
  (void)tol;
  if (component.empty()) throw Error("component_tree: empty component");
  ComponentTree t;
  t.root = *std::min_element(component.begin(), component.end());
  const Matrix& root_p = net.vertex(t.root).projection;
  t.parent[t.root] = t.root;
  t.carrier[t.root] = root_p;
  t.order.push_back(t.root);
  std::vector<int> frontier{t.root};
  size_t head = 0;
  while (head < t.order.size()) {
    const int u = t.order[head++];
    for (int w : net.reflecting_neighbors(u)) {
      if (t.parent.count(w)) continue;
      t.parent[w] = u;
      t.carrier[w] =
          normalize_to_isometry(net.vertex(w).projection * t.carrier[u], root_p);
      t.order.push_back(w);
    }
  }
  (void)frontier;
  if (t.order.size() != component.size())
    throw DisconnectedPath("component_tree: component is not connected");
  return t;
}

Matrix path_isometry(const ReflectionNetwork& net, const std::vector<int>& path,
                     const Tolerances& tol) {
  (void)tol;
  if (path.empty()) throw DisconnectedPath("path_isometry: empty path");
  const Matrix& first = net.vertex(path.front()).projection;
  Matrix product = first;
  for (size_t i = 1; i < path.size(); ++i) {
    const auto e = net.edge(path[i - 1], path[i]);
    if (!e || e->state != EdgeState::reflecting)
      throw DisconnectedPath("path_isometry: consecutive vertices not joined");
    product = net.vertex(path[i]).projection * product;
  }
  // a clean transport has a single repeated singular value on its support
  Eigen::JacobiSVD<Matrix> svd(product);
  const auto& sv = svd.singularValues();
  const int expected = projection_rank(first);
  const double top = sv(0);
  if (!(top > 0)) throw ZeroOperator("path_isometry: vanishing product");
  int nonzero = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * top * sv.size()) ++nonzero;
  if (nonzero != expected || (top - sv(expected - 1)) / top > 1e-6)
    throw MultipleSingularValues(
        "path_isometry: transport is not a scaled isometry");
  return normalize_to_isometry(product, first);
}

// ---------------------------------------------------------------------------
// minimality via cycle consistency
// ---------------------------------------------------------------------------

namespace {

// split off the eigenspaces of a unitary holonomy supported on range(p);
// returns the children in full-space coordinates
std::vector<Matrix> holonomy_children(const Matrix& u, const Matrix& p,
                                      int rank, const Tolerances& tol) {
  const Matrix w = range_basis(p, rank, tol);
  const Matrix h = w.adjoint() * u * w;
  const Matrix x = (h + h.adjoint()) / 2.0;
  const Matrix y = (h - h.adjoint()) / Complex(0.0, 2.0);
  std::vector<Matrix> clusters;  // projections inside the rank-dim space
  for (const auto& cx : spectral_projections(x, tol)) {
    if (cx.rank == 1) {
      clusters.push_back(cx.projection);
      continue;
    }
    const Matrix wx = range_basis(cx.projection, cx.rank, tol);
    const Matrix yc = wx.adjoint() * y * wx;
    for (const auto& cy : spectral_projections(yc, tol))
      clusters.push_back(wx * cy.projection * wx.adjoint());
  }
  if (clusters.size() < 2)
    throw Error("holonomy_children: non-scalar holonomy failed to split");
  std::vector<Matrix> out;
  for (const auto& c : clusters)
    out.push_back(projection_round(w * c * w.adjoint(), tol));
  return out;
}

}  // namespace

void establish_minimality(ReflectionNetwork& net, const Tolerances& tol,
                          ScatterLog* log) {
  const int cap = std::max(10 * net.dim(), 20);
  int repairs = 0;
  for (;;) {
    scatter_until_proper(net, tol, log);
    bool repaired = false;
    for (const auto& comp : net.components()) {
      if (comp.size() == 1) continue;
      const int rank = net.vertex(comp.front()).rank;
      for (int v : comp) {
        if (net.vertex(v).rank != rank)
          throw Error("establish_minimality: unequal ranks in one component");
      }
      const ComponentTree tree = component_tree(net, comp, tol);
      // fundamental cycles: reflecting edges not used by the tree
      for (int u : comp) {
        if (repaired) break;
        for (int w : net.reflecting_neighbors(u)) {
          if (w < u) continue;
          if (tree.parent.at(w) == u || tree.parent.at(u) == w) continue;
          const Matrix& a_iso = tree.carrier.at(w);
          const Matrix b_iso = normalize_to_isometry(
              net.vertex(w).projection * tree.carrier.at(u),
              net.vertex(tree.root).projection);
          const Complex overlap = hs_inner(a_iso, b_iso);
          if (std::abs(overlap) > 1e-12) {
            const Complex phase = overlap / std::abs(overlap);
            if ((b_iso - phase * a_iso).norm() <=
                kPhaseTol * std::sqrt(double(rank)))
              continue;  // cycle closes up to a phase
          }
          // non-scalar holonomy: split w along its eigenspaces
          const Matrix holonomy = b_iso * a_iso.adjoint();
          const auto children =
              holonomy_children(holonomy, net.vertex(w).projection, rank, tol);
          std::vector<int> nbrs = net.neighbors(w);
          net.kill(w);
          for (const auto& child : children) {
            const int id = net.add_vertex(child);
            for (int x : nbrs) {
              if (net.vertex(x).alive) net.set_unknown(id, x);
            }
          }
          if (log) {
            ++log->minimality_repairs;
            log->note("minimality repair at vertex " + std::to_string(w) +
                      " -> " + std::to_string(children.size()) + " pieces");
          }
          repaired = true;
          break;
        }
      }
      if (repaired) break;
    }
    if (!repaired) return;
    if (++repairs > cap)
      throw NonTermination("establish_minimality: repair cap exceeded");
  }
}

// ---------------------------------------------------------------------------
// completeness
// ---------------------------------------------------------------------------

std::vector<int> maximal_orthogonal_set(const ReflectionNetwork& net,
                                        const std::vector<int>& component) {
  std::vector<int> order = component;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (net.vertex(a).rank != net.vertex(b).rank)
      return net.vertex(a).rank < net.vertex(b).rank;
    return a < b;
  });
  std::vector<int> chosen;
  for (int v : order) {
    bool ok = true;
    for (int u : chosen) {
      if (net.edge(u, v)) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(v);
  }
  return chosen;
}

void establish_completeness(ReflectionNetwork& net, const Tolerances& tol,
                            ScatterLog* log) {
  const int d = net.dim();
  int additions = 0;
  for (;;) {
    establish_minimality(net, tol, log);

    Matrix covered = Matrix::Zero(d, d);
    for (const auto& comp : net.components())
      for (int v : maximal_orthogonal_set(net, comp))
        covered += net.vertex(v).projection;

    const Matrix deficit = Matrix::Identity(d, d) - covered;
    if (deficit.norm() <= 1e-8 * std::sqrt(double(d))) return;

    const Matrix def_p = projection_round(deficit, tol);
    if (projection_rank(def_p) == 0)
      throw Error("establish_completeness: deficit has no rank but large norm");

    // compress the deficit through the first vertex that leans into it and
    // meets the scalar-compression requirement
    int candidate = -1;
    double lean = 0.0;
    for (int v : net.alive_ids()) {
      const Matrix& p = net.vertex(v).projection;
      const int rank = net.vertex(v).rank;
      const double overlap = std::real((p * def_p).trace());
      if (overlap <= 1e-8 * rank) continue;
      const double lambda = 1.0 - overlap / rank;
      if ((p * covered * p - lambda * p).norm() <=
          1e-6 * std::max(1.0, double(rank))) {
        candidate = v;
        lean = overlap / rank;
        break;
      }
    }

    Matrix addition;
    if (candidate >= 0) {
      const Matrix& p = net.vertex(candidate).projection;
      addition = projection_round(def_p * p * def_p / lean, tol);
    } else {
      // nothing reaches into the deficit: it is a jointly untouched corner
      addition = def_p;
    }

    const int id = net.add_vertex(addition);
    for (int v : net.alive_ids()) {
      if (v == id) continue;
      const double overlap =
          std::real((addition * net.vertex(v).projection).trace());
      if (overlap > tol.zero_threshold(d)) net.set_unknown(id, v);
    }
    if (log) {
      ++log->completeness_additions;
      log->note("completeness addition rank " +
                std::to_string(net.vertex(id).rank) +
                (candidate >= 0 ? " via vertex " + std::to_string(candidate)
                                : " (untouched corner)"));
    }
    if (++additions > d)
      throw NonTermination("establish_completeness: addition cap exceeded");
  }
}

ReflectionNetwork decompose_generators(const std::vector<Matrix>& generators,
                                       const Tolerances& tol,
                                       bool include_identity, ScatterLog* log) {
  ReflectionNetwork net =
      build_initial_network(generators, tol, include_identity, log);
  scatter_until_proper(net, tol, log);
  establish_minimality(net, tol, log);
  establish_completeness(net, tol, log);
  return net;
}

}  // namespace irrep
