#include "nethj/slope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nethj/error.hpp"

namespace nethj {

std::vector<double> default_radius_ladder(double dx) {
  return {8.0 * dx, 4.0 * dx, 2.0 * dx};
}

SlopeEstimate estimate_slopes(const NetworkGrid& grid,
                              const std::vector<double>& values, int node,
                              std::vector<double> radii) {
  if (radii.empty()) radii = default_radius_ladder(grid.dx());
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (radii[i + 1] >= radii[i])
      throw Error(ErrorCode::ParameterOutOfRange, "radii must be decreasing");
  if (radii.back() < 2.0 * grid.dx() - 1e-12)
    throw Error(ErrorCode::RadiusBelowResolution,
                "smallest radius " + std::to_string(radii.back()) +
                    " < 2 dx = " + std::to_string(2.0 * grid.dx()));

  SlopeEstimate est;
  est.node = node;
  est.at_vertex = grid.network().vertex_at(grid.node(node)) >= 0;
  est.radii = radii;
  est.upper.assign(radii.size(), 0.0);
  est.lower.assign(radii.size(), 0.0);
  est.full.assign(radii.size(), 0.0);

  const auto nearby = grid.nodes_within(node, radii.front());
  const double v0 = values[node];
  for (const auto& [y, d] : nearby) {
    if (y == node || d <= 0.0) continue;
    const double diff = values[y] - v0;
    const double up = std::max(0.0, diff) / d;
    const double lo = std::max(0.0, -diff) / d;
    const double ab = std::abs(diff) / d;
    for (std::size_t r = 0; r < radii.size(); ++r) {
      if (d > radii[r]) continue;
      est.upper[r] = std::max(est.upper[r], up);
      est.lower[r] = std::max(est.lower[r], lo);
      est.full[r] = std::max(est.full[r], ab);
    }
  }
  est.upper_limit = est.upper.back();
  est.lower_limit = est.lower.back();
  est.full_limit = est.full.back();
  return est;
}

ResidualReport pde_residual(const ValueFunction& vf, const BoundField& v_potential,
                            std::vector<double> radii) {
  const NetworkGrid& grid = *vf.grid;
  const EmbeddedNetwork& net = grid.network();
  if (radii.empty()) radii = default_radius_ladder(grid.dx());
  if (vf.times.size() < 3)
    throw Error(ErrorCode::TimeOutOfRange,
                "need at least three stored times for the centered difference");

  std::vector<int> interior;
  for (int i = 0; i < grid.node_count(); ++i) {
    const NetworkPoint& p = grid.node(i);
    if (net.vertex_at(p) >= 0) continue;
    const double len = net.edge_length(p.edge);
    if (std::min(p.s, len - p.s) >= 2.0 * grid.dx() - 1e-12) interior.push_back(i);
  }
  if (interior.empty())
    throw Error(ErrorCode::NoInteriorNodes,
                "no edge-interior nodes at distance >= 2 dx from vertices");

  ResidualReport report;
  double sum = 0.0;
  for (std::size_t ti = 1; ti + 1 < vf.times.size(); ++ti) {
    const double dt2 = vf.times[ti + 1] - vf.times[ti - 1];
    for (int i : interior) {
      const double du_dt = (vf.values[ti + 1][i] - vf.values[ti - 1][i]) / dt2;
      const SlopeEstimate slope = estimate_slopes(grid, vf.values[ti], i, radii);
      const double vx = v_potential(grid.node(i));
      const double res =
          std::abs(du_dt + 0.5 * slope.full_limit * slope.full_limit + vx);
      report.entries.push_back({i, vf.times[ti], res});
      report.max = std::max(report.max, res);
      sum += res;
    }
  }
  report.mean = sum / static_cast<double>(report.entries.size());
  return report;
}

std::string residual_csv(const ValueFunction& vf, const ResidualReport& report) {
  const NetworkGrid& grid = *vf.grid;
  std::ostringstream os;
  os << "edge,s,t,residual\n";
  char buf[100];
  for (const ResidualEntry& e : report.entries) {
    const NetworkPoint& p = grid.node(e.node);
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", p.edge, p.s, e.t,
                  e.residual);
    os << buf;
  }
  return os.str();
}

}  // namespace nethj
