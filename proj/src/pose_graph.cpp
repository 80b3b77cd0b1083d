#include "coexplore/pose_graph.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace coex {

PoseGraph PoseGraph::from_edges(int n, const std::vector<GraphEdge>& edges) {
  PoseGraph g;
  g.nodes_.resize(static_cast<std::size_t>(n));
  for (const GraphEdge& e : edges) g.add_edge(e.i, e.j, e.weight);
  return g;
}

void PoseGraph::add_odometry_node(const Pose2D& pose, double weight) {
  if (nodes_.empty())
    throw std::logic_error("add_odometry_node: graph is empty");
  if (weight <= 0.0)
    throw std::invalid_argument("add_odometry_node: weight must be positive");
  const int last = node_count() - 1;
  nodes_.push_back(pose);
  edges_.push_back({last, last + 1, weight});
}

bool PoseGraph::try_loop_closure(double radius, double weight) {
  if (node_count() < 3) return false;
  const int newest = node_count() - 1;
  const Vec2 p = nodes_[newest].position();

  auto has_edge = [this](int a, int b) {
    for (const GraphEdge& e : edges_)
      if ((e.i == a && e.j == b) || (e.i == b && e.j == a)) return true;
    return false;
  };

  int best = -1;
  double best_d = radius;
  for (int i = 0; i < newest - 1; ++i) {  // newest-1 is chain-adjacent
    const double d = distance(nodes_[i].position(), p);
    if (d <= best_d && !has_edge(i, newest)) {
      best_d = d;
      best = i;
    }
  }
  if (best < 0) return false;
  edges_.push_back({best, newest, weight});
  return true;
}

void PoseGraph::add_edge(int i, int j, double weight) {
  if (i == j) throw std::invalid_argument("add_edge: self-loop");
  if (weight <= 0.0)
    throw std::invalid_argument("add_edge: weight must be positive");
  if (i < 0 || j < 0 || i >= node_count() || j >= node_count())
    throw std::out_of_range("add_edge: node index");
  edges_.push_back({i, j, weight});
}

std::string PoseGraph::to_edge_list() const {
  std::ostringstream out;
  for (const GraphEdge& e : edges_)
    out << e.i << " " << e.j << " " << e.weight << "\n";
  return out.str();
}

double log_spanning_tree_weight(const PoseGraph& g) {
  const int n = g.node_count();
  if (n < 2)
    throw std::invalid_argument("log_spanning_tree_weight: need >= 2 nodes");

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const GraphEdge& e : g.edges()) {
    lap(e.i, e.i) += e.weight;
    lap(e.j, e.j) += e.weight;
    lap(e.i, e.j) -= e.weight;
    lap(e.j, e.i) -= e.weight;
  }
  const Eigen::MatrixXd reduced = lap.bottomRightCorner(n - 1, n - 1);
  Eigen::LLT<Eigen::MatrixXd> llt(reduced);
  if (llt.info() != Eigen::Success)
    throw DisconnectedGraph("log_spanning_tree_weight: singular Laplacian");
  double log_det = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double d = llt.matrixL()(i, i);
    if (d <= 1e-9)
      throw DisconnectedGraph("log_spanning_tree_weight: singular Laplacian");
    log_det += 2.0 * std::log(d);
  }
  return log_det;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

void enumerate(const std::vector<GraphEdge>& edges, int n, std::size_t next,
               int chosen, double product, const UnionFind& uf, double& total) {
  if (chosen == n - 1) {
    total += product;
    return;
  }
  // Not enough edges left to finish a tree.
  if (edges.size() - next < static_cast<std::size_t>(n - 1 - chosen)) return;
  // Skip edge `next`.
  enumerate(edges, n, next + 1, chosen, product, uf, total);
  // Take edge `next` if it joins two components.
  UnionFind copy = uf;
  const GraphEdge& e = edges[next];
  if (copy.unite(e.i, e.j))
    enumerate(edges, n, next + 1, chosen + 1, product * e.weight, copy, total);
}

}  // namespace

double brute_force_spanning_trees(const PoseGraph& g) {
  const int n = g.node_count();
  if (n > 10) throw TooLarge("brute_force_spanning_trees: > 10 nodes");
  if (n < 2) return 0.0;
  double total = 0.0;
  enumerate(g.edges(), n, 0, 0, 1.0, UnionFind(n), total);
  return total;
}

}  // namespace coex
