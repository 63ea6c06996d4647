#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "nethj/geometry.hpp"

namespace nethj {

// Address of a point on a network: arclength parameter s measured from the
// first endpoint of edge `edge`, with 0 <= s <= edge length.
struct NetworkPoint {
  int edge = 0;
  double s = 0.0;
};

// A finite union of straight closed segments in R^d whose pairwise
// intersections are single shared vertices and whose vertex-edge graph is
// connected. Immutable after validation; all queries are read-only.
class EmbeddedNetwork {
 public:
  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  double edge_length(int e) const { return edge_len_[e]; }
  double total_length() const { return total_len_; }
  double min_edge_length() const { return min_edge_len_; }
  // Max pairwise Euclidean distance between vertices.
  double diameter() const { return diameter_; }
  // Symmetric coincidence tolerance: 1e-9 x diameter.
  double geom_tolerance() const { return eps_geom_; }

  // Edge ids incident to vertex v, ascending.
  const std::vector<int>& incident_edges(int v) const { return incident_[v]; }

  Point embed(const NetworkPoint& p) const;
  NetworkPoint canonicalize(const NetworkPoint& p) const;
  // Canonical address of vertex v (lowest incident edge id, matching end).
  NetworkPoint vertex_point(int v) const;
  // Vertex id within geom_tolerance of p's position, or -1 for interior points.
  int vertex_at(const NetworkPoint& p) const;
  NetworkPoint locate_point(const Point& q, double tol) const;

  // Minimum Euclidean distance from q to the union of segments.
  double dist_to(const Point& q) const;

  friend EmbeddedNetwork validate_network(int dim, std::vector<Point> vertices,
                                          std::vector<std::array<int, 2>> edges);

 private:
  EmbeddedNetwork() = default;
  void check_point(const NetworkPoint& p) const;

  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<double> edge_len_;
  std::vector<std::vector<int>> incident_;
  double total_len_ = 0.0;
  double min_edge_len_ = 0.0;
  double diameter_ = 0.0;
  double eps_geom_ = 0.0;
};

using NetworkPtr = std::shared_ptr<const EmbeddedNetwork>;

// Checks the network axioms exhaustively (all edge pairs) and throws the
// first violation: DuplicateVertex, DanglingEdgeEndpoint, ZeroLengthEdge,
// DuplicateEdge, VertexInsideEdge, IllegalEdgeIntersection, Disconnected.
EmbeddedNetwork validate_network(int dim, std::vector<Point> vertices,
                                 std::vector<std::array<int, 2>> edges);

// JSON file format: {"dim": d, "vertices": [[x1..xd],...], "edges": [[i,j],...]}.
// Loading validates; saving emits canonical ordering (vertices lexicographic,
// edges sorted with remapped indices).
EmbeddedNetwork load_network(const std::string& path);
EmbeddedNetwork network_from_json_text(const std::string& text);
std::string network_to_json_text(const EmbeddedNetwork& net);
void save_network(const EmbeddedNetwork& net, const std::string& path);

// Canonical copy: vertices sorted lexicographically, edges sorted.
EmbeddedNetwork canonical_network(const EmbeddedNetwork& net);

}  // namespace nethj
