#include "nethj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "nethj/error.hpp"

namespace nethj {

NetworkGrid::NetworkGrid(NetworkPtr net, double dx) : net_(std::move(net)), dx_(dx) {
  if (dx <= 0.0)
    throw Error(ErrorCode::ParameterOutOfRange, "grid spacing must be positive");
  const int nv = net_->vertex_count();
  const int ne = net_->edge_count();

  nodes_.reserve(nv);
  for (int v = 0; v < nv; ++v) nodes_.push_back(net_->vertex_point(v));

  edge_interior_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const double len = net_->edge_length(e);
    const int cells = std::max(1, static_cast<int>(std::ceil(len / dx_ - 1e-12)));
    for (int k = 1; k < cells; ++k) {
      const double s = len * k / cells;
      edge_interior_[e].push_back({s, static_cast<int>(nodes_.size())});
      nodes_.push_back({e, s});
    }
  }

  adjacency_.resize(nodes_.size());
  const auto link = [&](int a, int b, double w) {
    adjacency_[a].push_back({b, w});
    adjacency_[b].push_back({a, w});
  };
  for (int e = 0; e < ne; ++e) {
    const auto [va, vb] = net_->edges()[e];
    int prev = vertex_node(va);
    double prev_s = 0.0;
    for (const auto& [s, id] : edge_interior_[e]) {
      link(prev, id, s - prev_s);
      prev = id;
      prev_s = s;
    }
    link(prev, vertex_node(vb), net_->edge_length(e) - prev_s);
  }
}

std::vector<std::pair<double, int>> NetworkGrid::edge_nodes(int e) const {
  std::vector<std::pair<double, int>> out;
  const auto [va, vb] = net_->edges()[e];
  out.push_back({0.0, vertex_node(va)});
  out.insert(out.end(), edge_interior_[e].begin(), edge_interior_[e].end());
  out.push_back({net_->edge_length(e), vertex_node(vb)});
  return out;
}

std::vector<std::pair<int, double>> NetworkGrid::nodes_within(int i,
                                                              double radius) const {
  std::vector<std::pair<int, double>> found;
  std::vector<double> dist_map(nodes_.size(), -1.0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0.0, i});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (dist_map[u] >= 0.0) continue;
    dist_map[u] = d;
    found.push_back({u, d});
    for (const auto& [v, w] : adjacency_[u]) {
      if (dist_map[v] >= 0.0) continue;
      const double nd = d + w;
      if (nd <= radius) pq.push({nd, v});
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace nethj
