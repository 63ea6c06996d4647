#pragma once

#include <map>
#include <string>
#include <vector>

#include "nethj/field.hpp"
#include "nethj/generators.hpp"
#include "nethj/solver.hpp"

namespace nethj {

struct SolverConfig {
  std::string backend = "hopflax";  // "hopflax" | "semilagrangian"
  // dx = min edge length / dx_divisor per level; dt = dx unless overridden
  double dx_divisor = 8.0;
  double dt_override = 0.0;
  double tol_scale = 1.0;   // multiplies every default tolerance
  double tol_conv = 0.0;    // 0 selects 4 x (finest-level scheme tolerance)
};

// Certified scheme tolerance: the grid-min overshoot bound for Hopf-Lax,
// C_SL (dt + dx) for the semi-Lagrangian backend.
double scheme_tolerance(const ValueFunction& vf, double lipschitz_g);

// Frozen on the dyadic T^4 case; see the solver tests.
inline constexpr double kSemiLagrangianC = 1.0;

struct CheckResult {
  std::string name;
  std::string reference;  // formula the check instantiates
  double bound = 0.0;     // allowed value
  double measured = 0.0;
  bool pass = false;
};

struct ConvergenceEntry {
  int m = 0;
  int n = 0;
  double sup_diff = 0.0;
};

struct LevelMeta {
  int level = 0;
  std::string solver;
  double dx = 0.0;
  double dt = 0.0;
  int nodes = 0;
  double scheme_tol = 0.0;
};

struct StabilityReport {
  std::string kind;
  std::string g_spec;
  std::string v_spec;
  double T = 0.0;
  double lipschitz_k = 0.0;  // the level-independent Lipschitz constant used
  double tol_conv = 0.0;
  std::vector<LevelMeta> levels;
  std::vector<CheckResult> checks;
  std::vector<ConvergenceEntry> table;  // rows only for n >= m
  std::map<int, bool> converged;        // per m
  // exploratory: per m, log-log slope of sup-diff against d_H(N^n, N^N)
  std::map<int, double> rate_estimate;

  bool all_checks_pass() const;
  std::string to_json() const;
  std::string table_csv() const;
};

// Solves on each requested level and verifies the stability estimates:
// monotone decrease across levels, the uniform Lipschitz bound 2K delta_n,
// the initial-time sandwich, and uniform convergence to the finest-level
// proxy. All comparisons run on the level-m grid nodes mapped into each
// finer network (nesting guarantees containment).
StabilityReport run_stability(const ExpandingSequence& seq, const FieldSpec& g,
                              const FieldSpec& v_potential, double T,
                              const SolverConfig& config,
                              const std::vector<int>& m_levels,
                              const std::vector<int>& n_levels);

struct ComparisonReport {
  double max_violation = 0.0;  // max of (sub - super) over all nodes/times
  bool pass = false;
};

// Prop-4.8-style ordering of two computed solutions on the same grid/times.
ComparisonReport check_comparison_pair(const ValueFunction& vf_sub,
                                       const ValueFunction& vf_super, double tol);

// JSON summary + CSV convergence table, byte-deterministic.
void emit_report(const StabilityReport& report, const std::string& dir);

}  // namespace nethj
