#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "nethj/metric.hpp"
#include "nethj/network.hpp"

namespace nethj {

// Discretization of a network: one node per vertex plus uniform per-edge
// subdivisions at arclength spacing <= dx. Node 0..V-1 are the vertices.
class NetworkGrid {
 public:
  NetworkGrid(NetworkPtr net, double dx);

  const EmbeddedNetwork& network() const { return *net_; }
  NetworkPtr network_ptr() const { return net_; }
  double dx() const { return dx_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NetworkPoint>& nodes() const { return nodes_; }
  const NetworkPoint& node(int i) const { return nodes_[i]; }

  int vertex_node(int v) const { return v; }  // vertices come first
  // Nodes interior to edge e as (s, node index), ascending in s, without
  // the endpoint vertex nodes.
  const std::vector<std::pair<double, int>>& edge_interior(int e) const {
    return edge_interior_[e];
  }
  // All nodes on edge e including the endpoint vertices, ascending in s.
  std::vector<std::pair<double, int>> edge_nodes(int e) const;

  // Grid-graph neighbors (consecutive nodes along edges) with arc lengths;
  // grid-graph shortest paths agree with the intrinsic metric.
  const std::vector<std::pair<int, double>>& neighbors(int i) const {
    return adjacency_[i];
  }

  // Nodes within intrinsic distance <= radius of node i, with distances
  // (local Dijkstra over the grid graph; includes i itself at 0).
  std::vector<std::pair<int, double>> nodes_within(int i, double radius) const;

 private:
  NetworkPtr net_;
  double dx_;
  std::vector<NetworkPoint> nodes_;
  std::vector<std::vector<std::pair<double, int>>> edge_interior_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

using GridPtr = std::shared_ptr<const NetworkGrid>;

}  // namespace nethj
