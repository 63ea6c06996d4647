#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "nethj/error.hpp"
#include "nethj/field.hpp"
#include "nethj/generators.hpp"
#include "nethj/grid.hpp"
#include "nethj/metric.hpp"
#include "nethj/network.hpp"
#include "nethj/solver.hpp"
#include "nethj/stability.hpp"

using namespace nethj;

namespace {

struct Setup {
  std::shared_ptr<const EmbeddedNetwork> net;
  std::shared_ptr<const MetricOracle> oracle;
  GridPtr grid;
};

Setup make(EmbeddedNetwork raw, double dx) {
  Setup s;
  s.net = std::make_shared<EmbeddedNetwork>(std::move(raw));
  s.oracle = std::make_shared<MetricOracle>(s.net);
  s.grid = std::make_shared<NetworkGrid>(s.net, dx);
  return s;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("default time ladder has 65 equispaced entries from 0 to T") {
  const auto times = default_times(0.8);
  REQUIRE(times.size() == 65);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == doctest::Approx(0.8));
  CHECK(times[32] == doctest::Approx(0.4));
}

TEST_CASE("time ladders must start at zero and increase strictly") {
  const Setup s = make(dyadic_network(2), 0.05);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  CHECK(code_of([&] { hopf_lax_solve(s.oracle, s.grid, g, {0.1, 0.2}); }) ==
        ErrorCode::NonMonotoneTimes);
  CHECK(code_of([&] { hopf_lax_solve(s.oracle, s.grid, g, {0.0, 0.2, 0.2}); }) ==
        ErrorCode::NonMonotoneTimes);
  CHECK(code_of([&] {
          hopf_lax_value(*s.oracle, *s.grid, std::vector<double>(s.grid->node_count(), 0.0),
                         0.0, s.grid->node(0));
        }) == ErrorCode::TimeOutOfRange);
}

TEST_CASE("hopf-lax on the line matches the closed form for g(x) = x") {
  // u(t,x) = x - t/2 for x >= t, x^2/(2t) below; grid-min error is O(dx)
  const Setup s = make(dyadic_network(6), std::pow(2.0, -6) / 8.0);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  const std::vector<double> times{0.0, 0.1, 0.25};
  const ValueFunction vf = hopf_lax_solve(s.oracle, s.grid, g, times);
  const double bound =
      (1.0 + s.net->diameter() / (2.0 * 0.1)) * s.grid->dx();
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double t = times[k];
    for (int i = 0; i < s.grid->node_count(); ++i) {
      const double x = s.net->embed(s.grid->node(i))[0];
      const double exact = x >= t ? x - t / 2.0 : x * x / (2.0 * t);
      const double err = vf.values[k][i] - exact;
      CHECK(err >= -1e-12);        // grid min only over-estimates
      CHECK(err <= bound + 1e-12);
    }
  }
}

TEST_CASE("hopf-lax agrees with a dense brute-force minimization") {
  const Setup s = make(dyadic_network(4), std::pow(2.0, -4) / 8.0);
  const BoundField g(FieldSpec::euclid_dist_to({0.25}, 1.0), s.oracle);
  const double t = 0.3;
  const ValueFunction vf = hopf_lax_solve(s.oracle, s.grid, g, {0.0, t});
  const double top = 1.0 - std::pow(2.0, -4);
  const double bound =
      (1.0 + s.net->diameter() / (2.0 * t)) * s.grid->dx();
  for (int i = 0; i < s.grid->node_count(); i += 13) {
    const double x = s.net->embed(s.grid->node(i))[0];
    double best = 1e300;
    for (double y = 0.0; y <= top + 1e-12; y += 1e-4)
      best = std::min(best,
                      (x - y) * (x - y) / (2.0 * t) + std::abs(y - 0.25));
    // restricting the min to grid nodes can only over-estimate, by at most
    // the lipschitz bound times one grid spacing
    CHECK(vf.values[1][i] >= best - 1e-9);
    CHECK(vf.values[1][i] <= best + bound);
  }
}

TEST_CASE("semi-lagrangian input validation") {
  const Setup s = make(dyadic_network(3), 0.02);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  const BoundField v(FieldSpec::constant(0.0), s.oracle);
  CHECK(code_of([&] {
          semi_lagrangian_solve(s.oracle, s.grid, g, v, 1.0, 0.0, 2.0);
        }) == ErrorCode::NonPositiveStep);
  // reachable radius below one grid spacing cannot move the minimizer
  CHECK(code_of([&] {
          semi_lagrangian_solve(s.oracle, s.grid, g, v, 1.0, 0.001, 2.0);
        }) == ErrorCode::CFLViolation);
  CHECK(code_of([&] {
          semi_lagrangian_solve(s.oracle, s.grid, g, v, 0.1, 0.05, 2.0,
                                {0.0, 0.05, 0.5});
        }) == ErrorCode::TimeOutOfRange);
}

TEST_CASE("semi-lagrangian matches hopf-lax within the frozen constant") {
  // this is the calibration case for kSemiLagrangianC
  const Setup s = make(dyadic_network(4), std::pow(2.0, -4) / 8.0);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  const BoundField v(FieldSpec::constant(0.0), s.oracle);
  const double T = 0.4;
  const auto times = default_times(T);
  const ValueFunction hl = hopf_lax_solve(s.oracle, s.grid, g, times);
  for (double dt : {s.grid->dx(), s.grid->dx() / 2.0, 2.0 * s.grid->dx()}) {
    const ValueFunction sl =
        semi_lagrangian_solve(s.oracle, s.grid, g, v, T, dt, 2.0, times);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      for (int i = 0; i < s.grid->node_count(); ++i)
        worst = std::max(worst, std::abs(hl.values[k][i] - sl.values[k][i]));
    CHECK(worst <= kSemiLagrangianC * (dt + s.grid->dx()));
  }
}

TEST_CASE("a constant potential shifts the solution by -V t") {
  const Setup s = make(dyadic_network(4), std::pow(2.0, -4) / 8.0);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  const BoundField v0(FieldSpec::constant(0.0), s.oracle);
  const BoundField v3(FieldSpec::constant(3.0), s.oracle);
  const double T = 0.2;
  const double dt = s.grid->dx();
  const ValueFunction a =
      semi_lagrangian_solve(s.oracle, s.grid, g, v0, T, dt, 2.0);
  const ValueFunction b =
      semi_lagrangian_solve(s.oracle, s.grid, g, v3, T, dt, 2.0);
  const int nsteps = static_cast<int>(std::llround(T / dt));
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    // snapshots land on the nearest computed step
    const int snap = std::clamp(
        static_cast<int>(std::llround(a.times[k] / dt)), 0, nsteps);
    for (int i = 0; i < s.grid->node_count(); ++i)
      CHECK(b.values[k][i] ==
            doctest::Approx(a.values[k][i] - 3.0 * snap * dt).epsilon(1e-9));
  }
}

TEST_CASE("ordered data produce ordered solutions") {
  const Setup s = make(sierpinski_prefractal(2, default_sierpinski_corners()),
                       0.05);
  const BoundField g1(FieldSpec::euclid_dist_to({0.0, 0.0}), s.oracle);
  const BoundField g2(
      FieldSpec::max({FieldSpec::euclid_dist_to({0.0, 0.0}),
                      FieldSpec::euclid_dist_to({1.0, 0.0}, 0.5)}),
      s.oracle);
  const auto times = default_times(0.3);
  const ValueFunction u1 = hopf_lax_solve(s.oracle, s.grid, g1, times);
  const ValueFunction u2 = hopf_lax_solve(s.oracle, s.grid, g2, times);
  const ComparisonReport cmp = check_comparison_pair(u1, u2, 1e-12);
  CHECK(cmp.pass);
  CHECK(cmp.max_violation <= 0.0);
  // and the reversed pair genuinely violates the ordering
  const ComparisonReport rev = check_comparison_pair(u2, u1, 1e-12);
  CHECK_FALSE(rev.pass);
}

TEST_CASE("evaluate interpolates linearly between grid nodes") {
  const Setup s = make(dyadic_network(3), 0.02);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  const ValueFunction vf = hopf_lax_solve(s.oracle, s.grid, g, {0.0, 0.2});
  // at t = 0 the stored layer is g itself, linear on each edge
  const NetworkPoint p{0, 0.237};
  CHECK(evaluate(vf, 0.0, p) == doctest::Approx(0.237));
  // at nodes the evaluation is exact
  CHECK(evaluate(vf, 0.2, s.grid->node(5)) ==
        doctest::Approx(vf.values[1][5]));
}

TEST_CASE("csv output carries one row per time-node pair") {
  const Setup s = make(dyadic_network(2), 0.1);
  const BoundField g(FieldSpec::coordinate(0), s.oracle);
  const ValueFunction vf = hopf_lax_solve(s.oracle, s.grid, g, {0.0, 0.1});
  const std::string csv = value_function_csv(vf);
  CHECK(csv.rfind("t,edge,s,x1,u", 0) == 0);
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 2 * s.grid->node_count());
}
