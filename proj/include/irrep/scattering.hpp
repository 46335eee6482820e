#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irrep/linalg.hpp"
#include "irrep/types.hpp"

namespace irrep {

// pairwise relation between projections: an absent edge means the pair is
// known orthogonal, Unknown means not yet examined, Reflecting carries the
// scalar coefficient lambda of P_a P_b P_a = lambda P_a
enum class EdgeState { unknown, reflecting };

struct Edge {
  EdgeState state = EdgeState::unknown;
  double coefficient = 0.0;  // meaningful for reflecting edges only
  long order = 0;            // insertion id, used for queue tie-breaking
};

struct Vertex {
  int id = -1;
  Matrix projection;
  int rank = 0;
  bool alive = true;
};

// undirected graph of projections; dead vertices keep their slot so ids are
// stable for the whole run
class ReflectionNetwork {
 public:
  int dim() const { return dim_; }
  void set_dim(int d) { dim_ = d; }

  int add_vertex(Matrix projection);
  const Vertex& vertex(int id) const { return vertices_.at(id); }
  Vertex& vertex(int id) { return vertices_.at(id); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  std::vector<int> alive_ids() const;

  void kill(int id) { vertices_.at(id).alive = false; clear_edges_of(id); }

  // edge accessors: key is the unordered pair
  std::optional<Edge> edge(int a, int b) const;
  void set_unknown(int a, int b);
  void set_reflecting(int a, int b, double lambda);
  void set_absent(int a, int b);  // erase == known orthogonal
  long next_order() { return ++order_counter_; }

  // neighbors joined by a reflecting edge
  std::vector<int> reflecting_neighbors(int id) const;
  // all neighbors with any edge present
  std::vector<int> neighbors(int id) const;
  std::vector<std::pair<int, int>> unknown_edges() const;
  bool has_unknown_edges() const;

  // connected components over reflecting edges, each sorted ascending,
  // components ordered by their smallest member
  std::vector<std::vector<int>> components() const;

 private:
  void clear_edges_of(int id);
  static std::pair<int, int> key(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  int dim_ = 0;
  std::vector<Vertex> vertices_;
  std::map<std::pair<int, int>, Edge> edges_;
  long order_counter_ = 0;
};

// outcome of splitting the pair (P1, P2) along the spectrum of P1 P2 P1
struct ScatterOutcome {
  std::vector<double> coefficients;  // shared nonzero spectrum, descending
  std::vector<Matrix> pieces_1;      // matched pieces, same order
  std::vector<Matrix> pieces_2;
  Matrix null_1;  // leftover orthogonal to the other side (zero matrix if none)
  Matrix null_2;
  int null_rank_1 = 0;
  int null_rank_2 = 0;
};

ScatterOutcome scatter(const Matrix& p1, const Matrix& p2,
                       const Tolerances& tol = {});

// progress counters plus an optional verbose sink
struct ScatterLog {
  long scatter_count = 0;
  int minimality_repairs = 0;
  int completeness_additions = 0;
  bool verbose = false;
  std::vector<std::string> trace;
  void note(const std::string& line) {
    if (verbose) trace.push_back(line);
  }
};

// one vertex per spectral component of each generator; edges inside a
// generator are absent (spectral pieces are orthogonal), cross-generator
// pairs start unknown; rank-1 pairs are resolved immediately
ReflectionNetwork build_initial_network(const std::vector<Matrix>& generators,
                                        const Tolerances& tol = {},
                                        bool include_identity = true,
                                        ScatterLog* log = nullptr);

// resolve unknown edges (smallest endpoint rank first) until none remain
void scatter_until_proper(ReflectionNetwork& net, const Tolerances& tol = {},
                          ScatterLog* log = nullptr);

// breadth-first spanning tree of one reflecting component with the partial
// isometries that transport the root range to each member
struct ComponentTree {
  int root = -1;
  std::vector<int> order;        // bfs visit order
  std::map<int, int> parent;     // member -> tree parent (root maps to itself)
  std::map<int, Matrix> carrier; // member -> isometry from root range
};

ComponentTree component_tree(const ReflectionNetwork& net,
                             const std::vector<int>& component,
                             const Tolerances& tol = {});

// normalized product of the member projections along an explicit vertex path;
// consecutive vertices must share a reflecting edge
Matrix path_isometry(const ReflectionNetwork& net, const std::vector<int>& path,
                     const Tolerances& tol = {});

// break vertices whose cycle transport is inconsistent (non-scalar holonomy),
// rescatter, and repeat until every fundamental cycle closes up to a phase
void establish_minimality(ReflectionNetwork& net, const Tolerances& tol = {},
                          ScatterLog* log = nullptr);

// greedy maximal pairwise-orthogonal subset of one component
// (ascending rank, then ascending id)
std::vector<int> maximal_orthogonal_set(const ReflectionNetwork& net,
                                        const std::vector<int>& component);

// grow the network until the selected orthogonal sets resolve the identity,
// compressing the deficit through an overlapping vertex when possible and
// adding the leftover subspace directly otherwise
void establish_completeness(ReflectionNetwork& net, const Tolerances& tol = {},
                            ScatterLog* log = nullptr);

// full pipeline: initial network, scattering, minimality, completeness
ReflectionNetwork decompose_generators(const std::vector<Matrix>& generators,
                                       const Tolerances& tol = {},
                                       bool include_identity = true,
                                       ScatterLog* log = nullptr);

}  // namespace irrep
