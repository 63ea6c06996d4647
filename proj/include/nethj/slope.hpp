#pragma once

#include <string>
#include <vector>

#include "nethj/field.hpp"
#include "nethj/grid.hpp"
#include "nethj/solver.hpp"

namespace nethj {

// Numerical metric slopes at a grid node: per-radius sup difference
// quotients and their conservative limits (the value at the smallest
// radius). full >= max(upper, lower) at every radius.
struct SlopeEstimate {
  int node = 0;
  bool at_vertex = false;  // vertex slopes are reported but never certified
  std::vector<double> radii;   // descending
  std::vector<double> upper;   // [v(y)-v(x)]_+ / delta
  std::vector<double> lower;   // [v(y)-v(x)]_- / delta
  std::vector<double> full;    // |v(y)-v(x)| / delta
  double upper_limit = 0.0;
  double lower_limit = 0.0;
  double full_limit = 0.0;
};

// Default ladder {8 dx, 4 dx, 2 dx}.
std::vector<double> default_radius_ladder(double dx);

SlopeEstimate estimate_slopes(const NetworkGrid& grid,
                              const std::vector<double>& values, int node,
                              std::vector<double> radii);

struct ResidualEntry {
  int node = 0;
  double t = 0.0;
  double residual = 0.0;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  double max = 0.0;
  double mean = 0.0;
};

// Discrete residual |D_t u + |grad u|^2 / 2 + V| at edge-interior nodes
// (intrinsic distance >= 2 dx from every vertex) over the interior stored
// times, with D_t a centered difference and the slope from estimate_slopes.
// Summary only; thresholds are the caller's business.
ResidualReport pde_residual(const ValueFunction& vf, const BoundField& v_potential,
                            std::vector<double> radii = {});

std::string residual_csv(const ValueFunction& vf, const ResidualReport& report);

}  // namespace nethj
