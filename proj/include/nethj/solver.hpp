#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nethj/field.hpp"
#include "nethj/grid.hpp"
#include "nethj/metric.hpp"

namespace nethj {

// Sampled solution u(t, .) on a grid at a ladder of times. values[0] is the
// initial datum sampled on the grid.
struct ValueFunction {
  GridPtr grid;
  std::shared_ptr<const MetricOracle> oracle;
  std::vector<double> times;                 // increasing, times[0] = 0
  std::vector<std::vector<double>> values;   // [time][node]
  std::string solver;                        // "hopflax" | "semilagrangian"
  double dt = 0.0;
  double dx = 0.0;
};

// Evenly spaced output times 0, T/64, ..., T.
std::vector<double> default_times(double T);

// u(t,x) = min over grid nodes y of [ delta(x,y)^2 / (2t) + g(y) ], u(0,.) = g.
// Exact value-function backend for V = 0; the grid-restricted min over-
// estimates the continuum inf by at most (Lg + diam/(2 t_min)) dx.
ValueFunction hopf_lax_solve(std::shared_ptr<const MetricOracle> oracle,
                             GridPtr grid, const BoundField& g,
                             std::vector<double> times);

// Single-point evaluation of the Hopf-Lax formula at any network point.
double hopf_lax_value(const MetricOracle& oracle, const NetworkGrid& grid,
                      const std::vector<double>& g_values, double t,
                      const NetworkPoint& x);

// Backward dynamic programming for H = p^2/2 + V: one Hopf-Lax step of
// length dt per iteration against the piecewise-linear interpolant of the
// previous layer. The per-edge quadratic minimization is closed-form, so
// control speeds are not quantized to grid multiples.
ValueFunction semi_lagrangian_solve(std::shared_ptr<const MetricOracle> oracle,
                                    GridPtr grid, const BoundField& g,
                                    const BoundField& v_potential, double T,
                                    double dt, double v_max,
                                    std::vector<double> times = {});

// Linear interpolation in arclength on p's edge at the nearest stored time;
// exact at nodes and stored times.
double evaluate(const ValueFunction& vf, double t, const NetworkPoint& p);

// CSV rows `t,edge,s,x1..xd,u`.
std::string value_function_csv(const ValueFunction& vf);

}  // namespace nethj
