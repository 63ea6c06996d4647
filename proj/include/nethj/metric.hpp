#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nethj/network.hpp"

namespace nethj {

// Polyline on the network. Consecutive points lie on a common edge or meet
// at a shared vertex; length is the sum of per-edge arclength gaps.
struct NetworkPath {
  std::vector<NetworkPoint> points;
  double length = 0.0;
};

// Intrinsic (shortest-path) distance and geodesic queries over a fixed
// network. Vertex-to-vertex distances are precomputed once; point queries
// then cost O(1) table lookups. Immutable after build.
class MetricOracle {
 public:
  explicit MetricOracle(NetworkPtr net);

  const EmbeddedNetwork& network() const { return *net_; }
  NetworkPtr network_ptr() const { return net_; }

  double vertex_distance(int u, int v) const { return vertex_dist_[u][v]; }
  // Whole row of the vertex-distance table, for tight inner loops.
  const std::vector<double>& vertex_row(int u) const { return vertex_dist_[u]; }

  // Exact intrinsic distance: min over the same-edge direct arc and the
  // four endpoint-routed combinations.
  double distance(const NetworkPoint& p, const NetworkPoint& q) const;

  // A shortest path realizing distance(p,q); among equals, the one with the
  // lexicographically smallest vertex sequence.
  NetworkPath geodesic(const NetworkPoint& p, const NetworkPoint& q) const;

  // Edge joining vertices u,v, or -1. At most one exists.
  int edge_between(int u, int v) const;

 private:
  void check(const NetworkPoint& p) const;

  NetworkPtr net_;
  std::vector<std::vector<double>> vertex_dist_;
};

// Exact arclength of a polyline path; throws DiscontinuousPath when
// consecutive points share no edge.
double curve_length(const EmbeddedNetwork& net, const NetworkPath& path);

// Piecewise-constant metric speed (arclength gap / time gap) per segment.
std::vector<double> metric_speed(const EmbeddedNetwork& net,
                                 const NetworkPath& path,
                                 const std::vector<double>& timestamps);

// CSV rows `i,j,dist` for vertex pairs i <= j.
std::string distance_table_csv(const MetricOracle& oracle);
// JSON list of {edge, s}.
std::string geodesic_to_json(const NetworkPath& path);

}  // namespace nethj
