#include "nethj/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nethj/error.hpp"

namespace nethj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

MetricOracle::MetricOracle(NetworkPtr net) : net_(std::move(net)) {
  const int nv = net_->vertex_count();
  vertex_dist_.assign(nv, std::vector<double>(nv, kInf));

  struct Arc {
    int to;
    double w;
  };
  std::vector<std::vector<Arc>> adj(nv);
  for (int e = 0; e < net_->edge_count(); ++e) {
    const auto [a, b] = net_->edges()[e];
    adj[a].push_back({b, net_->edge_length(e)});
    adj[b].push_back({a, net_->edge_length(e)});
  }

  for (int src = 0; src < nv; ++src) {
    auto& d = vertex_dist_[src];
    d[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, src});
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du > d[u]) continue;
      for (const Arc& arc : adj[u]) {
        const double nd = du + arc.w;
        if (nd < d[arc.to]) {
          d[arc.to] = nd;
          pq.push({nd, arc.to});
        }
      }
    }
  }

  // build-time sanity: symmetry, path length dominates the chord, and the
  // triangle inequality (all triples when small, sampled otherwise)
  const double tol = 1e-12 * std::max(1.0, net_->diameter());
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      if (std::abs(vertex_dist_[i][j] - vertex_dist_[j][i]) > tol)
        throw std::logic_error("vertex_dist asymmetry");
      if (vertex_dist_[i][j] + tol < dist(net_->vertices()[i], net_->vertices()[j]))
        throw std::logic_error("vertex_dist below Euclidean distance");
    }
  }
  const auto check_triple = [&](int a, int b, int c) {
    if (vertex_dist_[a][c] > vertex_dist_[a][b] + vertex_dist_[b][c] + tol)
      throw std::logic_error("vertex_dist triangle inequality violated");
  };
  if (nv <= 64) {
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b)
        for (int c = 0; c < nv; ++c) check_triple(a, b, c);
  } else {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> pick(0, nv - 1);
    for (int k = 0; k < 3000; ++k) check_triple(pick(rng), pick(rng), pick(rng));
  }
}

void MetricOracle::check(const NetworkPoint& p) const {
  if (p.edge < 0 || p.edge >= net_->edge_count() || p.s < -net_->geom_tolerance() ||
      p.s > net_->edge_length(p.edge) + net_->geom_tolerance())
    throw Error(ErrorCode::ForeignPoint,
                "point (edge " + std::to_string(p.edge) + ", s " +
                    std::to_string(p.s) + ") is not on this network");
}

double MetricOracle::distance(const NetworkPoint& p, const NetworkPoint& q) const {
  check(p);
  check(q);
  double best = kInf;
  if (p.edge == q.edge) best = std::abs(p.s - q.s);
  const auto [pa, pb] = net_->edges()[p.edge];
  const auto [qa, qb] = net_->edges()[q.edge];
  const double plen = net_->edge_length(p.edge);
  const double qlen = net_->edge_length(q.edge);
  const int pv[2] = {pa, pb};
  const double pd[2] = {p.s, plen - p.s};
  const int qv[2] = {qa, qb};
  const double qd[2] = {q.s, qlen - q.s};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      best = std::min(best, pd[i] + vertex_dist_[pv[i]][qv[j]] + qd[j]);
  return best;
}

int MetricOracle::edge_between(int u, int v) const {
  for (int e : net_->incident_edges(u)) {
    const auto [a, b] = net_->edges()[e];
    if (a == v || b == v) return e;
  }
  return -1;
}

NetworkPath MetricOracle::geodesic(const NetworkPoint& p, const NetworkPoint& q) const {
  check(p);
  check(q);
  const double tol = 1e-12 * std::max(1.0, net_->diameter());

  // candidate routes: same-edge direct arc plus the four vertex-routed ones,
  // each described by its full vertex sequence (possibly empty)
  struct Route {
    double length = kInf;
    std::vector<int> vertex_seq;
  };

  const auto vertex_route = [&](int u, int v) {
    // lexicographically smallest shortest vertex path u -> v
    std::vector<int> seq{u};
    int cur = u;
    while (cur != v) {
      int next = -1;
      for (int e : net_->incident_edges(cur)) {
        const auto [a, b] = net_->edges()[e];
        const int w = (a == cur) ? b : a;
        if (std::abs(net_->edge_length(e) + vertex_dist_[w][v] -
                     vertex_dist_[cur][v]) <= tol) {
          if (next < 0 || w < next) next = w;
        }
      }
      if (next < 0) throw std::logic_error("geodesic reconstruction failed");
      seq.push_back(next);
      cur = next;
    }
    return seq;
  };

  std::vector<Route> routes;
  if (p.edge == q.edge) routes.push_back({std::abs(p.s - q.s), {}});

  const auto [pa, pb] = net_->edges()[p.edge];
  const auto [qa, qb] = net_->edges()[q.edge];
  const int pv[2] = {pa, pb};
  const double pd[2] = {p.s, net_->edge_length(p.edge) - p.s};
  const int qv[2] = {qa, qb};
  const double qd[2] = {q.s, net_->edge_length(q.edge) - q.s};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Route r;
      r.length = pd[i] + vertex_dist_[pv[i]][qv[j]] + qd[j];
      r.vertex_seq = vertex_route(pv[i], qv[j]);
      routes.push_back(std::move(r));
    }

  const Route* best = &routes[0];
  for (const Route& r : routes) {
    if (r.length < best->length - tol) {
      best = &r;
    } else if (std::abs(r.length - best->length) <= tol &&
               r.vertex_seq < best->vertex_seq) {
      best = &r;
    }
  }

  NetworkPath path;
  const auto push = [&](const NetworkPoint& np) {
    if (!path.points.empty()) {
      const Point prev = net_->embed(path.points.back());
      if (dist(prev, net_->embed(np)) <= net_->geom_tolerance()) return;
    }
    path.points.push_back(np);
  };
  push(net_->canonicalize(p));
  for (int v : best->vertex_seq) push(net_->vertex_point(v));
  push(net_->canonicalize(q));
  path.length = curve_length(*net_, path);
  return path;
}

namespace {

// All (edge, s) representations of a point: one for interior points, one per
// incident edge for vertex points.
std::vector<NetworkPoint> representations(const EmbeddedNetwork& net,
                                          const NetworkPoint& p) {
  const int v = net.vertex_at(p);
  if (v < 0) return {p};
  std::vector<NetworkPoint> reps;
  for (int e : net.incident_edges(v)) {
    const auto [a, b] = net.edges()[e];
    if (a == v) reps.push_back({e, 0.0});
    if (b == v) reps.push_back({e, net.edge_length(e)});
  }
  return reps;
}

}  // namespace

double curve_length(const EmbeddedNetwork& net, const NetworkPath& path) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const auto ra = representations(net, path.points[i]);
    const auto rb = representations(net, path.points[i + 1]);
    double gap = -1.0;
    for (const NetworkPoint& a : ra) {
      for (const NetworkPoint& b : rb) {
        if (a.edge == b.edge) {
          const double g = std::abs(a.s - b.s);
          if (gap < 0.0 || g < gap) gap = g;
        }
      }
    }
    if (gap < 0.0)
      throw Error(ErrorCode::DiscontinuousPath,
                  "points " + std::to_string(i) + " and " + std::to_string(i + 1) +
                      " share no edge");
    total += gap;
  }
  return total;
}

std::vector<double> metric_speed(const EmbeddedNetwork& net,
                                 const NetworkPath& path,
                                 const std::vector<double>& timestamps) {
  if (timestamps.size() != path.points.size())
    throw Error(ErrorCode::NonMonotoneTime,
                "timestamp count does not match path point count");
  for (std::size_t i = 0; i + 1 < timestamps.size(); ++i)
    if (timestamps[i + 1] <= timestamps[i])
      throw Error(ErrorCode::NonMonotoneTime,
                  "timestamps not strictly increasing at index " + std::to_string(i));
  std::vector<double> speeds;
  speeds.reserve(path.points.size() > 0 ? path.points.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    NetworkPath seg;
    seg.points = {path.points[i], path.points[i + 1]};
    const double gap = curve_length(net, seg);
    speeds.push_back(gap / (timestamps[i + 1] - timestamps[i]));
  }
  return speeds;
}

std::string distance_table_csv(const MetricOracle& oracle) {
  std::ostringstream os;
  os << "i,j,dist\n";
  const int nv = oracle.network().vertex_count();
  for (int i = 0; i < nv; ++i)
    for (int j = i; j < nv; ++j)
      os << i << "," << j << "," << fmt(oracle.vertex_distance(i, j)) << "\n";
  return os.str();
}

std::string geodesic_to_json(const NetworkPath& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const NetworkPoint& p : path.points)
    j.push_back({{"edge", p.edge}, {"s", p.s}});
  return j.dump(2) + "\n";
}

}  // namespace nethj
