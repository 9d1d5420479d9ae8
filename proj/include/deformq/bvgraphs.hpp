#pragma once

// Feynman graphs of the trace density: one yellow vertex (the observable),
// 2n green vertices (connection insertions), black half-edges paired into
// propagators and purple fermionic tails.

#include <cstdint>
#include <vector>

namespace dq {

enum class Color { yellow, green };
enum class Flavor { black, purple };

struct GraphVertex {
  Color color = Color::green;
  int genus = 0;
  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
};

struct HalfEdge {
  int vertex = 0;
  Flavor flavor = Flavor::black;
  friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
};

struct LabeledGraph {
  std::vector<GraphVertex> vertices;
  std::vector<HalfEdge> half_edges;
  /// involution[h] is the partner of h; fixed points are tails.
  std::vector<int> involution;

  /// Throws ValidationError unless the involution and vertex references are well formed.
  void validate() const;
  int num_edges() const;
  int valency(int v) const;
  int yellow_vertex() const;
  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

bool admissible(const LabeledGraph& G, int n);
/// p + g + |E| for an admissible graph.
int hbar_order(const LabeledGraph& G, int n);

struct GraphBudget {
  std::size_t max_graphs = 1000000;
};

/// Admissible graphs of order l with valencies <= valency_cap, one per
/// isomorphism class (the yellow vertex is fixed, green vertices permute).
std::vector<LabeledGraph> enumerate_admissible(int n, int l, int valency_cap, const GraphBudget& budget = {});

/// Number of admissible graphs with labeled vertices and labeled half-edges.
std::uint64_t labeled_admissible_count(int n, int l, int valency_cap);

/// Canonical key of a graph up to green-vertex permutation and half-edge relabeling.
std::vector<int> canonical_form(const LabeledGraph& G);

struct LocalityReport {
  bool ok = true;
  int max_yellow_valency = 0;
  std::size_t graphs = 0;
};

/// Checks yellow valency <= |E| <= l over every enumerated graph.
LocalityReport verify_locality_bound(int n, int l, int valency_cap, const GraphBudget& budget = {});

}  // namespace dq
