#include "nethj/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nethj/error.hpp"

namespace nethj {

namespace fs = std::filesystem;

EmbeddedNetwork dyadic_network(int n) {
  if (n < 1)
    throw Error(ErrorCode::DepthTooSmall,
                "dyadic network needs n >= 1, got " + std::to_string(n));
  std::vector<Point> verts;
  verts.push_back({0.0});
  for (int i = 1; i <= n; ++i) verts.push_back({1.0 - std::ldexp(1.0, -i)});
  std::vector<std::array<int, 2>> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, i + 1});
  return validate_network(1, std::move(verts), std::move(edges));
}

namespace {

// Barycentric triple with implicit denominator 2^n; sums to 2^n.
using Bary = std::array<std::int64_t, 3>;
using BaryEdge = std::pair<Bary, Bary>;

BaryEdge make_edge(const Bary& a, const Bary& b) {
  return a < b ? BaryEdge{a, b} : BaryEdge{b, a};
}

}  // namespace

EmbeddedNetwork sierpinski_prefractal(int n, const std::array<Point, 3>& corners) {
  if (n < 0)
    throw Error(ErrorCode::DepthTooSmall, "sierpinski level must be >= 0");
  for (const Point& c : corners)
    if (c.size() != 2)
      throw Error(ErrorCode::ParameterOutOfRange, "corners must lie in R^2");
  const double cross =
      (corners[1][0] - corners[0][0]) * (corners[2][1] - corners[0][1]) -
      (corners[1][1] - corners[0][1]) * (corners[2][0] - corners[0][0]);
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    scale = std::max(scale, dist(corners[i], corners[(i + 1) % 3]));
  if (std::abs(cross) <= 1e-12 * scale * scale)
    throw Error(ErrorCode::CollinearCorners, "corner triangle is degenerate");

  // level-0 sides in barycentric units
  std::set<BaryEdge> cur = {
      make_edge({1, 0, 0}, {0, 1, 0}),
      make_edge({0, 1, 0}, {0, 0, 1}),
      make_edge({1, 0, 0}, {0, 0, 1}),
  };
  std::int64_t denom = 1;
  for (int level = 1; level <= n; ++level) {
    std::set<BaryEdge> next;
    for (const BaryEdge& e : cur) {
      for (int i = 0; i < 3; ++i) {
        // psi_i doubles the denominator and shifts toward corner i
        Bary a = e.first, b = e.second;
        a[i] += denom;
        b[i] += denom;
        next.insert(make_edge(a, b));
      }
    }
    cur = std::move(next);
    denom *= 2;
  }

  std::map<Bary, int> vertex_id;
  for (const BaryEdge& e : cur) {
    vertex_id.emplace(e.first, 0);
    vertex_id.emplace(e.second, 0);
  }
  int idx = 0;
  for (auto& [bary, id] : vertex_id) id = idx++;

  std::vector<Point> verts(vertex_id.size());
  for (const auto& [bary, id] : vertex_id) {
    Point p(2, 0.0);
    for (int k = 0; k < 2; ++k)
      p[k] = (static_cast<double>(bary[0]) * corners[0][k] +
              static_cast<double>(bary[1]) * corners[1][k] +
              static_cast<double>(bary[2]) * corners[2][k]) /
             static_cast<double>(denom);
    verts[id] = p;
  }
  std::vector<std::array<int, 2>> edges;
  edges.reserve(cur.size());
  for (const BaryEdge& e : cur)
    edges.push_back({vertex_id.at(e.first), vertex_id.at(e.second)});
  std::sort(edges.begin(), edges.end());
  return validate_network(2, std::move(verts), std::move(edges));
}

ExpandingSequence dyadic_sequence(int depth) {
  if (depth < 1) throw Error(ErrorCode::DepthTooSmall, "depth must be >= 1");
  ExpandingSequence seq;
  seq.kind = "dyadic";
  seq.params_json = nlohmann::json{{"depth", depth}}.dump();
  for (int n = 1; n <= depth; ++n) seq.levels.push_back(dyadic_network(n));
  return seq;
}

ExpandingSequence sierpinski_sequence(int depth, const std::array<Point, 3>& corners) {
  if (depth < 0) throw Error(ErrorCode::DepthTooSmall, "depth must be >= 0");
  ExpandingSequence seq;
  seq.kind = "sierpinski";
  seq.params_json =
      nlohmann::json{{"depth", depth},
                     {"corners", std::vector<Point>(corners.begin(), corners.end())}}
          .dump();
  for (int n = 0; n <= depth; ++n)
    seq.levels.push_back(sierpinski_prefractal(n, corners));
  return seq;
}

namespace {

// Does `fine` lie (within eps) inside some edge of `coarse`?
bool edge_contained(const EmbeddedNetwork& coarse, const Point& b0,
                    const Point& b1, double eps) {
  for (int e = 0; e < coarse.edge_count(); ++e) {
    const Point& a0 = coarse.vertices()[coarse.edges()[e][0]];
    const Point& a1 = coarse.vertices()[coarse.edges()[e][1]];
    if (segment_contains_segment(a0, a1, b0, b1, eps)) return true;
  }
  return false;
}

// Tiling check: the edges of `fine` contained in the segment [a0,a1] must
// cover it without gaps.
bool edge_tiled_by(const EmbeddedNetwork& fine, const Point& a0, const Point& a1,
                   double eps) {
  const double len = dist(a0, a1);
  std::vector<std::pair<double, double>> intervals;
  for (int e = 0; e < fine.edge_count(); ++e) {
    const Point& b0 = fine.vertices()[fine.edges()[e][0]];
    const Point& b1 = fine.vertices()[fine.edges()[e][1]];
    if (!segment_contains_segment(a0, a1, b0, b1, eps)) continue;
    double t0 = closest_param_on_segment(b0, a0, a1) * len;
    double t1 = closest_param_on_segment(b1, a0, a1) * len;
    if (t0 > t1) std::swap(t0, t1);
    intervals.push_back({t0, t1});
  }
  if (intervals.empty()) return false;
  std::sort(intervals.begin(), intervals.end());
  if (intervals.front().first > eps) return false;
  double covered = intervals.front().second;
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].first > covered + eps) return false;
    covered = std::max(covered, intervals[i].second);
  }
  return covered >= len - eps;
}

bool vertex_present(const EmbeddedNetwork& net, const Point& p, double eps) {
  for (const Point& v : net.vertices())
    if (dist(v, p) <= eps) return true;
  return false;
}

}  // namespace

ExpandingReport verify_expanding(const std::vector<EmbeddedNetwork>& levels,
                                 ExpandMode mode, double r_scale) {
  if (levels.size() < 2)
    throw Error(ErrorCode::EmptySequence, "need at least two levels");
  const int nlev = static_cast<int>(levels.size());
  double eps = 0.0;
  for (const EmbeddedNetwork& net : levels)
    eps = std::max(eps, net.geom_tolerance());
  if (r_scale <= 0.0) r_scale = levels.front().diameter();

  ExpandingReport report;
  report.mode = mode;
  report.nesting_ok = true;

  // Nesting: vertex containment and edge tiling per level pair
  for (int m = 0; m + 1 < nlev && report.nesting_ok; ++m) {
    const EmbeddedNetwork& coarse = levels[m];
    const EmbeddedNetwork& fine = levels[m + 1];
    for (const Point& v : coarse.vertices()) {
      if (!vertex_present(fine, v, eps)) {
        report.nesting_ok = false;
        std::ostringstream os;
        os << "vertex of level " << m << " missing from level " << m + 1;
        report.nesting_witness = os.str();
        break;
      }
    }
    for (int e = 0; e < coarse.edge_count() && report.nesting_ok; ++e) {
      const Point& a0 = coarse.vertices()[coarse.edges()[e][0]];
      const Point& a1 = coarse.vertices()[coarse.edges()[e][1]];
      if (!edge_tiled_by(fine, a0, a1, eps)) {
        report.nesting_ok = false;
        std::ostringstream os;
        os << "edge " << e << " of level " << m
           << " is not a union of level-" << m + 1 << " edges";
        report.nesting_witness = os.str();
      }
    }
  }
  if (!report.nesting_ok) return report;

  // new_edges[m][l]: level-l edges not contained in N^m, for l > m
  // (nesting makes containment-in-an-edge the exact clipping criterion:
  // everything else meets N^m in at most finitely many vertex points)
  const auto new_edges = [&](int m, int l) {
    std::vector<int> out;
    for (int e = 0; e < levels[l].edge_count(); ++e) {
      const Point& b0 = levels[l].vertices()[levels[l].edges()[e][0]];
      const Point& b1 = levels[l].vertices()[levels[l].edges()[e][1]];
      if (!edge_contained(levels[m], b0, b1, eps)) out.push_back(e);
    }
    return out;
  };
  std::vector<std::vector<std::vector<int>>> new_cache(
      nlev, std::vector<std::vector<int>>(nlev));
  for (int m = 0; m < nlev; ++m)
    for (int l = m + 1; l < nlev; ++l) new_cache[m][l] = new_edges(m, l);

  // collect distinct vertices of the union with their first level
  std::vector<std::pair<Point, int>> all_vertices;
  for (int l = 0; l < nlev; ++l)
    for (const Point& v : levels[l].vertices()) {
      bool known = false;
      for (const auto& [p, first] : all_vertices)
        if (dist(p, v) <= eps) {
          known = true;
          break;
        }
      if (!known) all_vertices.push_back({v, l});
    }

  report.stabilization_ok = true;
  for (const auto& [v, first] : all_vertices) {
    VertexCertificate cert;
    cert.position = v;
    cert.first_level = first;
    if (first == nlev - 1) {
      // no finer level exists: nothing to stabilize against
      cert.certified = true;
      cert.vacuous = true;
      cert.radius = 0.0;
      report.certificates.push_back(cert);
      continue;
    }
    double best_radius = -1.0;
    int best_m = -1;
    int fail_level = -1;
    Point fail_point;
    for (int m = first; m < nlev - 1; ++m) {
      double radius = std::numeric_limits<double>::infinity();
      double margin = std::numeric_limits<double>::infinity();
      int worst_level = -1;
      Point worst_point;
      for (int l = m + 1; l < nlev; ++l) {
        double lvl_min = std::numeric_limits<double>::infinity();
        Point lvl_point;
        for (int e : new_cache[m][l]) {
          const Point& b0 = levels[l].vertices()[levels[l].edges()[e][0]];
          const Point& b1 = levels[l].vertices()[levels[l].edges()[e][1]];
          const double t = closest_param_on_segment(v, b0, b1);
          const Point w = lerp(b0, b1, t);
          const double d = dist(v, w);
          if (d < lvl_min) {
            lvl_min = d;
            lvl_point = w;
          }
        }
        if (mode == ExpandMode::FixedR) {
          if (lvl_min < radius) {
            radius = lvl_min;
            worst_level = l;
            worst_point = lvl_point;
          }
        } else {
          const double r_l = r_scale * std::ldexp(1.0, -(l + 1));
          const double this_margin = lvl_min - r_l;
          if (this_margin < margin) {
            margin = this_margin;
            worst_level = l;
            worst_point = lvl_point;
          }
        }
      }
      const double score = (mode == ExpandMode::FixedR) ? radius : margin;
      if (score > eps && score > best_radius) {
        best_radius = score;
        best_m = m;
      }
      if (best_m < 0 && worst_level >= 0 && fail_level < 0) {
        fail_level = worst_level;
        fail_point = worst_point;
      }
    }
    cert.certified = best_m >= 0;
    cert.level_m = best_m;
    cert.radius = std::max(best_radius, 0.0);
    if (!cert.certified && first >= nlev - 2) {
      // only one finer level exists beyond this vertex's first appearance;
      // its stabilization level may lie past the generated range
      cert.certified = true;
      cert.vacuous = true;
      cert.radius = 0.0;
    }
    if (!cert.certified) {
      cert.witness_level = fail_level;
      cert.witness_point = fail_point;
      report.stabilization_ok = false;
    }
    report.certificates.push_back(cert);
  }
  return report;
}

void save_sequence(const ExpandingSequence& seq, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  nlohmann::json manifest;
  manifest["kind"] = seq.kind;
  manifest["params"] = seq.params_json.empty()
                           ? nlohmann::json::object()
                           : nlohmann::json::parse(seq.params_json);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < seq.levels.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "level_%02zu.json", i);
    save_network(seq.levels[i], (fs::path(dir) / name).string());
    files.push_back(name);
  }
  manifest["levels"] = files;
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw Error(ErrorCode::IoError, "cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

ExpandingSequence load_sequence(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  ExpandingSequence seq;
  try {
    seq.kind = manifest.at("kind").get<std::string>();
    seq.params_json = manifest.at("params").dump();
    const fs::path base = fs::path(manifest_path).parent_path();
    for (const auto& f : manifest.at("levels"))
      seq.levels.push_back(load_network((base / f.get<std::string>()).string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return seq;
}

}  // namespace nethj
