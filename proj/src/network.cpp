#include "nethj/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nethj/error.hpp"

namespace nethj {

namespace {

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

void EmbeddedNetwork::check_point(const NetworkPoint& p) const {
  if (p.edge < 0 || p.edge >= edge_count())
    throw Error(ErrorCode::ParameterOutOfRange,
                "edge index " + std::to_string(p.edge) + " out of range");
  const double len = edge_len_[p.edge];
  if (p.s < -eps_geom_ || p.s > len + eps_geom_)
    throw Error(ErrorCode::ParameterOutOfRange,
                "arclength " + std::to_string(p.s) + " outside [0, " +
                    std::to_string(len) + "] on edge " + std::to_string(p.edge));
}

Point EmbeddedNetwork::embed(const NetworkPoint& p) const {
  check_point(p);
  const auto [a, b] = edges_[p.edge];
  const double len = edge_len_[p.edge];
  const double t = std::clamp(p.s / len, 0.0, 1.0);
  return lerp(vertices_[a], vertices_[b], t);
}

NetworkPoint EmbeddedNetwork::vertex_point(int v) const {
  const int e = incident_[v][0];
  return edges_[e][0] == v ? NetworkPoint{e, 0.0}
                           : NetworkPoint{e, edge_len_[e]};
}

int EmbeddedNetwork::vertex_at(const NetworkPoint& p) const {
  const double len = edge_len_[p.edge];
  if (p.s <= eps_geom_) return edges_[p.edge][0];
  if (p.s >= len - eps_geom_) return edges_[p.edge][1];
  return -1;
}

NetworkPoint EmbeddedNetwork::canonicalize(const NetworkPoint& p) const {
  check_point(p);
  const int v = vertex_at(p);
  if (v < 0) return p;
  return vertex_point(v);
}

NetworkPoint EmbeddedNetwork::locate_point(const Point& q, double tol) const {
  if (static_cast<int>(q.size()) != dim_)
    throw Error(ErrorCode::ParameterOutOfRange, "query dimension mismatch");
  int best_edge = -1;
  double best_s = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int e = 0; e < edge_count(); ++e) {
    const Point& a = vertices_[edges_[e][0]];
    const Point& b = vertices_[edges_[e][1]];
    const double t = closest_param_on_segment(q, a, b);
    const double d = dist(q, lerp(a, b, t));
    const double s = t * edge_len_[e];
    // ties: lowest edge id, then smallest s
    if (d < best_d - eps_geom_ ||
        (d <= best_d + eps_geom_ &&
         (best_edge < 0 || e < best_edge || (e == best_edge && s < best_s)))) {
      if (d < best_d) best_d = d;
      best_edge = e;
      best_s = s;
    }
  }
  if (best_d > tol)
    throw Error(ErrorCode::NotOnNetwork,
                "point " + point_str(q) + " at distance " +
                    std::to_string(best_d) + " > tol " + std::to_string(tol));
  return canonicalize({best_edge, best_s});
}

double EmbeddedNetwork::dist_to(const Point& q) const {
  double best = std::numeric_limits<double>::infinity();
  for (int e = 0; e < edge_count(); ++e) {
    best = std::min(best, point_segment_dist(q, vertices_[edges_[e][0]],
                                             vertices_[edges_[e][1]]));
  }
  return best;
}

EmbeddedNetwork validate_network(int dim, std::vector<Point> vertices,
                                 std::vector<std::array<int, 2>> edges) {
  if (dim < 1) throw Error(ErrorCode::ParameterOutOfRange, "dim must be >= 1");
  for (const auto& v : vertices) {
    if (static_cast<int>(v.size()) != dim)
      throw Error(ErrorCode::ParameterOutOfRange,
                  "vertex dimension mismatch at " + point_str(v));
  }

  const int nv = static_cast<int>(vertices.size());
  const int ne = static_cast<int>(edges.size());

  double diameter = 0.0;
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      diameter = std::max(diameter, dist(vertices[i], vertices[j]));
  const double eps = 1e-9 * std::max(diameter, 1e-300);

  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j)
      if (dist(vertices[i], vertices[j]) <= eps)
        throw Error(ErrorCode::DuplicateVertex,
                    "vertices " + std::to_string(i) + " and " +
                        std::to_string(j) + " coincide at " +
                        point_str(vertices[i]));

  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = edges[e];
    if (a < 0 || a >= nv || b < 0 || b >= nv)
      throw Error(ErrorCode::DanglingEdgeEndpoint,
                  "edge " + std::to_string(e) + " references vertex out of range");
    if (a == b || dist(vertices[a], vertices[b]) <= eps)
      throw Error(ErrorCode::ZeroLengthEdge, "edge " + std::to_string(e));
    const auto key = std::minmax(a, b);
    if (!seen.insert({key.first, key.second}).second)
      throw Error(ErrorCode::DuplicateEdge, "edge " + std::to_string(e));
  }

  // condition (2): the only vertices on a closed edge are its endpoints
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = edges[e];
    for (int v = 0; v < nv; ++v) {
      if (v == a || v == b) continue;
      if (point_segment_dist(vertices[v], vertices[a], vertices[b]) <= eps)
        throw Error(ErrorCode::VertexInsideEdge,
                    "vertex " + std::to_string(v) + " lies on edge " +
                        std::to_string(e));
    }
  }

  // condition (3): two closed edges meet in at most one point, a shared vertex
  for (int e = 0; e < ne; ++e) {
    for (int f = e + 1; f < ne; ++f) {
      const auto [a0, a1] = edges[e];
      const auto [b0, b1] = edges[f];
      const Point& A0 = vertices[a0];
      const Point& A1 = vertices[a1];
      const Point& B0 = vertices[b0];
      const Point& B1 = vertices[b1];
      const SegmentClosest cl = segment_segment_closest(A0, A1, B0, B1);
      if (cl.distance > eps) continue;  // disjoint

      const Point w = lerp(A0, A1, cl.s);
      const auto fail = [&](const char* why) {
        throw Error(ErrorCode::IllegalEdgeIntersection,
                    "edges " + std::to_string(e) + " and " + std::to_string(f) +
                        " intersect at " + point_str(w) + " (" + why + ")");
      };

      // collinear overlap of positive length?
      int inside = 0;
      for (const Point* q : {&B0, &B1})
        if (point_segment_dist(*q, A0, A1) <= eps) ++inside;
      for (const Point* q : {&A0, &A1})
        if (point_segment_dist(*q, B0, B1) <= eps) ++inside;
      if (inside >= 2) {
        // two containment witnesses: either a shared endpoint counted from
        // both sides (touching) or a genuine overlap; distinguish by the
        // separation of the witnesses
        std::vector<Point> on;
        for (const Point* q : {&B0, &B1})
          if (point_segment_dist(*q, A0, A1) <= eps) on.push_back(*q);
        for (const Point* q : {&A0, &A1})
          if (point_segment_dist(*q, B0, B1) <= eps) on.push_back(*q);
        for (std::size_t i = 0; i < on.size(); ++i)
          for (std::size_t j = i + 1; j < on.size(); ++j)
            if (dist(on[i], on[j]) > eps) fail("collinear overlap");
      }

      // point contact: must be a vertex shared by both edges
      const bool shared =
          (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) &&
          (dist(w, vertices[a0]) <= eps || dist(w, vertices[a1]) <= eps);
      if (!shared) fail("contact point is not a shared vertex");
    }
  }

  // condition (4): connectivity of the vertex-edge graph
  if (nv > 0) {
    std::vector<int> comp(nv, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    std::vector<std::vector<int>> adj(nv);
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = 0;
          stack.push_back(w);
        }
    }
    for (int v = 0; v < nv; ++v)
      if (comp[v] < 0)
        throw Error(ErrorCode::Disconnected,
                    "vertices 0 and " + std::to_string(v) +
                        " lie in different components");
  }

  EmbeddedNetwork net;
  net.dim_ = dim;
  net.vertices_ = std::move(vertices);
  net.edges_ = std::move(edges);
  net.diameter_ = diameter;
  net.eps_geom_ = eps;
  net.edge_len_.resize(ne);
  net.incident_.assign(nv, {});
  net.min_edge_len_ = std::numeric_limits<double>::infinity();
  for (int e = 0; e < ne; ++e) {
    const auto [a, b] = net.edges_[e];
    net.edge_len_[e] = dist(net.vertices_[a], net.vertices_[b]);
    net.total_len_ += net.edge_len_[e];
    net.min_edge_len_ = std::min(net.min_edge_len_, net.edge_len_[e]);
    net.incident_[a].push_back(e);
    net.incident_[b].push_back(e);
  }
  return net;
}

EmbeddedNetwork canonical_network(const EmbeddedNetwork& net) {
  const int nv = net.vertex_count();
  std::vector<int> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return net.vertices()[a] < net.vertices()[b];
  });
  std::vector<int> rank(nv);
  for (int i = 0; i < nv; ++i) rank[order[i]] = i;

  std::vector<Point> verts(nv);
  for (int i = 0; i < nv; ++i) verts[i] = net.vertices()[order[i]];
  std::vector<std::array<int, 2>> edges;
  edges.reserve(net.edge_count());
  for (const auto& [a, b] : net.edges()) {
    const auto [lo, hi] = std::minmax(rank[a], rank[b]);
    edges.push_back({lo, hi});
  }
  std::sort(edges.begin(), edges.end());
  return validate_network(net.dim(), std::move(verts), std::move(edges));
}

EmbeddedNetwork network_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<Point> verts = j.at("vertices").get<std::vector<Point>>();
    std::vector<std::array<int, 2>> edges =
        j.at("edges").get<std::vector<std::array<int, 2>>>();
    return validate_network(dim, std::move(verts), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

EmbeddedNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return network_from_json_text(ss.str());
}

std::string network_to_json_text(const EmbeddedNetwork& net) {
  const EmbeddedNetwork canon = canonical_network(net);
  nlohmann::json j;
  j["dim"] = canon.dim();
  j["vertices"] = canon.vertices();
  j["edges"] = canon.edges();
  return j.dump(2) + "\n";
}

void save_network(const EmbeddedNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  out << network_to_json_text(net);
}

}  // namespace nethj
