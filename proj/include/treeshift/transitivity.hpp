#pragma once

// ε-chains on a finite point set and resolution-bounded deciders for
// ICT, CICT, IBT, IBT* and IBT°.

#include <optional>
#include <string>
#include <vector>

#include "treeshift/orbits.hpp"

namespace treeshift {

struct Edge {
  int from;
  char letter;
  int to;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Labeled edges x -i-> y with d(σ_i(x), y) < ε examined to depth D.
class EdgeGraph {
 public:
  EdgeGraph(std::vector<Configuration> points, Dyadic epsilon, int depth);

  /// A graph given directly by its edges (no points behind it).
  static EdgeGraph synthetic(Signature sig, int vertices, std::vector<Edge> edges);

  const Signature& signature() const noexcept { return sig_; }
  const std::vector<Configuration>& points() const noexcept { return points_; }
  bool has_points() const noexcept { return !points_.empty(); }
  int size() const noexcept { return n_; }
  Dyadic epsilon() const noexcept { return epsilon_; }
  int depth() const noexcept { return depth_; }
  /// Sorted by (from, letter order, to).
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(int from, char letter, int to) const;
  /// Edge whose reverse step also is an edge (groups); any edge for monoids.
  bool has_bi_edge(int from, char letter, int to) const;
  /// Targets of `from` under `letter`, ascending.
  const std::vector<int>& out(int from, char letter) const;

 private:
  EdgeGraph(Signature sig, int n, Dyadic epsilon, int depth);
  void index();

  Signature sig_;
  int n_ = 0;
  Dyadic epsilon_;
  int depth_ = 0;
  std::vector<Configuration> points_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::vector<int>>> out_;  // [from][letter index]
};

EdgeGraph edge_graph(const std::vector<Configuration>& points, Dyadic epsilon, int depth);

struct ChainWitness {
  ReducedWord word;
  std::vector<int> points;  // x_1 .. x_{n+1}
};

struct ChainOptions {
  std::optional<char> first;
  std::optional<char> last;
  bool bi_edges = false;  // step only along edges whose reverse also is an edge
};

/// Shortest nonempty chain from -> to by BFS over (point, last letter); the
/// index word is kept reduced. Ties go to the least letter, then least point.
std::optional<ChainWitness> find_chain(const EdgeGraph& g, int from, int to, const ChainOptions& opts = {});

/// Steps are edges and the word is reduced.
bool chain_is_valid(const EdgeGraph& g, const ChainWitness& c);

struct IctResult {
  bool holds = false;
  std::vector<std::vector<std::optional<ChainWitness>>> chains;  // [from][to]
};

IctResult is_ict(const EdgeGraph& g);

struct CictAssignment {
  std::vector<char> i;  // entry letter per point
  std::vector<char> t;  // exit letter per point
};

struct CictRefutation {
  std::optional<int> point;         // a point with no admissible (i, t) pair
  std::vector<char> in_letters;     // labels of edges into it
  std::vector<char> out_letters;    // labels of edges out of it
  std::string reason;
};

struct CictResult {
  bool holds = false;
  std::optional<CictAssignment> assignment;
  std::optional<CictRefutation> refutation;
  /// Constrained chains for the assignment, [from][to].
  std::vector<std::vector<std::optional<ChainWitness>>> chains;
};

/// Lexicographically least assignment (points in order, letter pairs in
/// letter order). Throws SearchBudgetExhausted past `budget` search nodes.
CictResult is_cict(const EdgeGraph& g, std::size_t budget = 1000000);

struct Core {
  std::vector<int> vertices;  // ascending
  std::vector<Edge> edges;    // usable edges inside the core
  bool contains(int v) const;
};

/// Greatest vertex set in which every vertex has, for every letter, an edge
/// into the set (bi-edges for groups).
Core core(const EdgeGraph& g);

struct IbtWitness {
  int root;
  std::vector<ReducedWord> sites;  // site of each point of Y
  std::optional<int> y;            // final point (star / circ)
  std::vector<ReducedWord> y_sites;
  std::vector<int> labels;  // point index per site of Σ^(R+1), ball order
  std::optional<PseudoOrbit> orbit;
  std::optional<DefectReport> report;
};

struct IbtRefutation {
  std::vector<int> outside_core;
  std::string reason;
};

struct IbtResult {
  bool witnessed = false;
  std::optional<IbtWitness> witness;
  std::optional<IbtRefutation> refutation;
};

IbtResult is_ibt(const EdgeGraph& g, int radius);
/// Group signatures: adds a final point y at two sites ending in distinct letters.
IbtResult is_ibt_star(const EdgeGraph& g, int radius);
/// Monoid signatures: the root carries y and so does one more site.
IbtResult is_ibt_circ(const EdgeGraph& g, int radius);

/// Independent structural check of a witness: labels form a labeling of
/// Σ^(R+1) along (bi-)edges, sites carry their points, prefix conditions hold.
bool ibt_witness_is_valid(const EdgeGraph& g, const IbtWitness& w, int radius, bool star, bool circ,
                          std::string* why = nullptr);

}  // namespace treeshift
