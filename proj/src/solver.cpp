#include "nethj/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "nethj/error.hpp"
#include "nethj/parallel.hpp"

namespace nethj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_times(const std::vector<double>& times) {
  if (times.empty() || times[0] != 0.0)
    throw Error(ErrorCode::NonMonotoneTimes, "times must start at 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] <= times[i])
      throw Error(ErrorCode::NonMonotoneTimes,
                  "times not strictly increasing at index " + std::to_string(i));
}

std::vector<double> sample_field(const BoundField& f, const NetworkGrid& grid) {
  std::vector<double> vals(grid.node_count());
  for (int i = 0; i < grid.node_count(); ++i) vals[i] = f(grid.node(i));
  return vals;
}

}  // namespace

std::vector<double> default_times(double T) {
  std::vector<double> times(65);
  for (int k = 0; k <= 64; ++k) times[k] = T * k / 64.0;
  return times;
}

double hopf_lax_value(const MetricOracle& oracle, const NetworkGrid& grid,
                      const std::vector<double>& g_values, double t,
                      const NetworkPoint& x) {
  if (t == 0.0) {
    // not generally a grid node; interpolate the datum via the formula limit
    throw Error(ErrorCode::TimeOutOfRange, "hopf_lax_value needs t > 0");
  }
  double best = kInf;
  for (int y = 0; y < grid.node_count(); ++y) {
    const double d = oracle.distance(x, grid.node(y));
    const double v = d * d / (2.0 * t) + g_values[y];
    if (v < best) best = v;
  }
  return best;
}

ValueFunction hopf_lax_solve(std::shared_ptr<const MetricOracle> oracle,
                             GridPtr grid, const BoundField& g,
                             std::vector<double> times) {
  check_times(times);
  ValueFunction vf;
  vf.grid = grid;
  vf.oracle = oracle;
  vf.times = std::move(times);
  vf.solver = "hopflax";
  vf.dx = grid->dx();
  const int n = grid->node_count();
  const std::vector<double> g_values = sample_field(g, *grid);
  vf.values.assign(vf.times.size(), std::vector<double>(n));
  vf.values[0] = g_values;

  // Flattened node geometry so the inner minimization avoids the generic
  // distance call: delta(x,y) is the same-edge arc (shared edge) against the
  // four endpoint-routed combinations. Identical to MetricOracle::distance.
  const EmbeddedNetwork& net = grid->network();
  std::vector<int> edge_of(n), v0(n), v1(n);
  std::vector<double> d0(n), d1(n);
  for (int i = 0; i < n; ++i) {
    const NetworkPoint p = grid->node(i);
    edge_of[i] = p.edge;
    v0[i] = net.edges()[p.edge][0];
    v1[i] = net.edges()[p.edge][1];
    d0[i] = p.s;
    d1[i] = net.edge_length(p.edge) - p.s;
  }

  for (std::size_t k = 1; k < vf.times.size(); ++k) {
    const double inv2t = 1.0 / (2.0 * vf.times[k]);
    auto& layer = vf.values[k];
    parallel_for(0, n, [&](int x) {
      const std::vector<double>& row0 = oracle->vertex_row(v0[x]);
      const std::vector<double>& row1 = oracle->vertex_row(v1[x]);
      const double dx0 = d0[x], dx1 = d1[x];
      const int ex = edge_of[x];
      const double sx = d0[x];
      double best = kInf;
      for (int y = 0; y < n; ++y) {
        const double via0 = dx0 + row0[v0[y]] + d0[y];
        const double via1 = dx0 + row0[v1[y]] + d1[y];
        const double via2 = dx1 + row1[v0[y]] + d0[y];
        const double via3 = dx1 + row1[v1[y]] + d1[y];
        double d = std::min(std::min(via0, via1), std::min(via2, via3));
        if (edge_of[y] == ex) d = std::min(d, std::abs(d0[y] - sx));
        const double v = d * d * inv2t + g_values[y];
        if (v < best) best = v;
      }
      layer[x] = best;
    });
  }
  return vf;
}

namespace {

// One backward step: min over y of [ delta(x,y)^2/(2 dt) - V(x) dt + u(y) ],
// with u piecewise linear along grid segments and y ranging over the ball of
// radius `reach` around x. Pieces are precomputed per node.
struct ReachPiece {
  int a = 0;        // entry node (distance d_a from x)
  int b = 0;        // other end of the grid segment
  double d_a = 0.0;
  double w = 0.0;       // full segment length
  double sigma_cap = 0.0;  // how far into the segment this piece extends
};

struct ReachSet {
  std::vector<ReachPiece> pieces;
};

std::vector<ReachSet> build_reach_sets(const NetworkGrid& grid, double reach) {
  std::vector<ReachSet> sets(grid.node_count());
  parallel_for(0, grid.node_count(), [&](int x) {
    const auto found = grid.nodes_within(x, reach);
    std::unordered_map<int, double> dist_of;
    dist_of.reserve(found.size() * 2);
    for (const auto& [node, d] : found) dist_of[node] = d;
    auto& pieces = sets[x].pieces;
    for (const auto& [a, d_a] : found) {
      for (const auto& [b, w] : grid.neighbors(a)) {
        const auto it = dist_of.find(b);
        // up to the watershed where the geodesic switches to enter via b
        double cap = (it != dist_of.end())
                         ? std::clamp((w + it->second - d_a) / 2.0, 0.0, w)
                         : w;
        cap = std::min(cap, reach - d_a);
        if (cap <= 0.0) continue;
        pieces.push_back({a, b, d_a, w, cap});
      }
    }
  });
  return sets;
}

double step_value(const ReachSet& rs, const std::vector<double>& u, int x,
                  double dt) {
  double best = u[x];  // y = x, delta = 0
  for (const ReachPiece& p : rs.pieces) {
    const double ua = u[p.a];
    const double slope = (u[p.b] - ua) / p.w;
    // q(sigma) = (d_a + sigma)^2/(2 dt) + ua + slope*sigma on [0, cap]
    const auto q = [&](double sigma) {
      const double d = p.d_a + sigma;
      return d * d / (2.0 * dt) + ua + slope * sigma;
    };
    best = std::min(best, q(0.0));
    best = std::min(best, q(p.sigma_cap));
    const double stat = -slope * dt - p.d_a;
    if (stat > 0.0 && stat < p.sigma_cap) best = std::min(best, q(stat));
  }
  return best;
}

}  // namespace

ValueFunction semi_lagrangian_solve(std::shared_ptr<const MetricOracle> oracle,
                                    GridPtr grid, const BoundField& g,
                                    const BoundField& v_potential, double T,
                                    double dt, double v_max,
                                    std::vector<double> times) {
  if (dt <= 0.0) throw Error(ErrorCode::NonPositiveStep, "dt must be positive");
  if (v_max * dt < grid->dx())
    throw Error(ErrorCode::CFLViolation,
                "reachable radius v_max*dt = " + std::to_string(v_max * dt) +
                    " below grid spacing " + std::to_string(grid->dx()));
  if (times.empty()) times = default_times(T);
  check_times(times);
  if (times.back() > T * (1.0 + 1e-12))
    throw Error(ErrorCode::TimeOutOfRange, "requested time beyond horizon");

  ValueFunction vf;
  vf.grid = grid;
  vf.oracle = oracle;
  vf.times = times;
  vf.solver = "semilagrangian";
  vf.dt = dt;
  vf.dx = grid->dx();

  const int n = grid->node_count();
  const std::vector<double> g_values = sample_field(g, *grid);
  std::vector<double> v_values = sample_field(v_potential, *grid);

  const int nsteps = std::max(1, static_cast<int>(std::llround(T / dt)));
  // snapshot step index per requested time (nearest step)
  std::vector<int> snap_step(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    snap_step[i] = std::clamp(
        static_cast<int>(std::llround(times[i] / dt)), 0, nsteps);

  const std::vector<ReachSet> reach = build_reach_sets(*grid, v_max * dt);

  vf.values.assign(times.size(), {});
  std::vector<double> cur = g_values;
  std::vector<double> next(n);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (snap_step[i] == 0) vf.values[i] = cur;
  for (int k = 1; k <= nsteps; ++k) {
    parallel_for(0, n, [&](int x) {
      next[x] = step_value(reach[x], cur, x, dt) - v_values[x] * dt;
    });
    cur.swap(next);
    for (std::size_t i = 0; i < times.size(); ++i)
      if (snap_step[i] == k) vf.values[i] = cur;
  }
  // requested times rounding past the last computed step
  for (std::size_t i = 0; i < times.size(); ++i)
    if (vf.values[i].empty()) vf.values[i] = cur;
  return vf;
}

double evaluate(const ValueFunction& vf, double t, const NetworkPoint& p) {
  const NetworkGrid& grid = *vf.grid;
  const EmbeddedNetwork& net = grid.network();
  if (t < -1e-12 || t > vf.times.back() + 1e-12)
    throw Error(ErrorCode::TimeOutOfRange,
                "t = " + std::to_string(t) + " outside [0, " +
                    std::to_string(vf.times.back()) + "]");
  std::size_t ti = 0;
  double bestgap = kInf;
  for (std::size_t i = 0; i < vf.times.size(); ++i) {
    const double gap = std::abs(vf.times[i] - t);
    if (gap < bestgap) {
      bestgap = gap;
      ti = i;
    }
  }
  const std::vector<double>& layer = vf.values[ti];

  NetworkPoint q = net.canonicalize(p);
  const int v = net.vertex_at(q);
  if (v >= 0) return layer[grid.vertex_node(v)];

  const auto nodes = grid.edge_nodes(q.edge);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const auto [s0, n0] = nodes[i];
    const auto [s1, n1] = nodes[i + 1];
    if (q.s >= s0 - 1e-15 && q.s <= s1 + 1e-15) {
      const double w = (s1 > s0) ? (q.s - s0) / (s1 - s0) : 0.0;
      return layer[n0] + w * (layer[n1] - layer[n0]);
    }
  }
  throw Error(ErrorCode::ForeignPoint, "point not bracketed by grid nodes");
}

std::string value_function_csv(const ValueFunction& vf) {
  const NetworkGrid& grid = *vf.grid;
  const EmbeddedNetwork& net = grid.network();
  std::ostringstream os;
  os << "t,edge,s";
  for (int k = 0; k < net.dim(); ++k) os << ",x" << (k + 1);
  os << ",u\n";
  char buf[64];
  for (std::size_t ti = 0; ti < vf.times.size(); ++ti) {
    for (int i = 0; i < grid.node_count(); ++i) {
      const NetworkPoint& p = grid.node(i);
      std::snprintf(buf, sizeof(buf), "%.17g", vf.times[ti]);
      os << buf << "," << p.edge << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", p.s);
      os << buf;
      const Point xyz = net.embed(p);
      for (double c : xyz) {
        std::snprintf(buf, sizeof(buf), "%.17g", c);
        os << "," << buf;
      }
      std::snprintf(buf, sizeof(buf), "%.17g", vf.values[ti][i]);
      os << "," << buf << "\n";
    }
  }
  return os.str();
}

}  // namespace nethj
