#pragma once

#include <vector>

#include "coexplore/grid.hpp"

namespace coex {

struct GraphEdge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

struct DisconnectedGraph : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simplified per-agent pose graph: odometry chain plus loop-closure edges.
// Node 0 is the spawn pose.
class PoseGraph {
 public:
  PoseGraph() = default;
  explicit PoseGraph(const Pose2D& spawn) { nodes_.push_back(spawn); }

  // Arbitrary edge set over n placeholder nodes (tests, debugging).
  static PoseGraph from_edges(int n, const std::vector<GraphEdge>& edges);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Pose2D>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }

  // Appends a node linked to the previous last node.
  void add_odometry_node(const Pose2D& pose, double weight);

  // If the newest node lies within radius of a non-adjacent earlier node,
  // adds one edge to the nearest such node. Returns true if an edge was
  // added. No duplicate edges; idempotent for the same newest node.
  bool try_loop_closure(double radius, double weight);

  // Raw edge for tests / direct construction.
  void add_edge(int i, int j, double weight);

  // Plain edge-list dump: one "i j weight" line per edge.
  std::string to_edge_list() const;

 private:
  std::vector<Pose2D> nodes_;
  std::vector<GraphEdge> edges_;
};

// Log of the weighted spanning-tree count: log det of the reduced weighted
// Laplacian (row/col 0 deleted), via Cholesky in log space. For unit weights
// this is log(#spanning trees).
double log_spanning_tree_weight(const PoseGraph& g);

// Exhaustive enumeration oracle: sum over spanning trees of the product of
// edge weights. Graphs of more than 10 nodes are rejected.
double brute_force_spanning_trees(const PoseGraph& g);

}  // namespace coex
