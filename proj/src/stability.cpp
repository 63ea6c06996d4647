#include "nethj/stability.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nethj/error.hpp"
#include "nethj/hausdorff.hpp"

namespace nethj {

double scheme_tolerance(const ValueFunction& vf, double lipschitz_g) {
  if (vf.solver == "hopflax") {
    double t_min = 0.0;
    for (double t : vf.times)
      if (t > 0.0) {
        t_min = t;
        break;
      }
    const double diam = vf.grid->network().diameter();
    if (t_min <= 0.0) return lipschitz_g * vf.dx;
    return (lipschitz_g + diam / (2.0 * t_min)) * vf.dx;
  }
  return kSemiLagrangianC * (vf.dt + vf.dx);
}

bool StabilityReport::all_checks_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

struct LevelSolution {
  int level = 0;
  std::shared_ptr<const MetricOracle> oracle;
  GridPtr grid;
  ValueFunction vf;
  double scheme_tol = 0.0;
};

}  // namespace

StabilityReport run_stability(const ExpandingSequence& seq, const FieldSpec& g,
                              const FieldSpec& v_potential, double T,
                              const SolverConfig& config,
                              const std::vector<int>& m_levels,
                              const std::vector<int>& n_levels) {
  const int nlev = static_cast<int>(seq.levels.size());
  for (int n : n_levels)
    if (n < 0 || n >= nlev)
      throw Error(ErrorCode::LevelNotGenerated,
                  "level " + std::to_string(n) + " not in the sequence");
  for (int m : m_levels)
    if (std::find(n_levels.begin(), n_levels.end(), m) == n_levels.end())
      throw Error(ErrorCode::LevelNotGenerated,
                  "m level " + std::to_string(m) + " not among solved levels");
  if (n_levels.empty()) throw Error(ErrorCode::EmptySequence, "no levels requested");

  StabilityReport report;
  report.kind = seq.kind;
  report.g_spec = g.to_json_text();
  report.v_spec = v_potential.to_json_text();
  report.T = T;

  const std::vector<double> times = default_times(T);
  const bool v_is_zero = v_potential.is_identically_zero();
  const double lip_g = g.structural_lipschitz();

  // solve every requested level
  std::map<int, LevelSolution> sols;
  double max_v_abs = 0.0;
  double max_v_plus = 0.0;
  for (int n : n_levels) {
    LevelSolution sol;
    sol.level = n;
    auto net = std::make_shared<EmbeddedNetwork>(seq.levels[n]);
    const double dx = net->min_edge_length() / config.dx_divisor;
    sol.oracle = std::make_shared<MetricOracle>(net);
    sol.grid = std::make_shared<NetworkGrid>(net, dx);
    const BoundField gb(g, sol.oracle);
    const BoundField vb(v_potential, sol.oracle);
    for (int i = 0; i < sol.grid->node_count(); ++i) {
      const double v = vb(sol.grid->node(i));
      max_v_abs = std::max(max_v_abs, std::abs(v));
      max_v_plus = std::max(max_v_plus, std::max(0.0, v));
    }
    if (config.backend == "hopflax" && v_is_zero) {
      sol.vf = hopf_lax_solve(sol.oracle, sol.grid, gb, times);
    } else {
      const double dt = config.dt_override > 0.0 ? config.dt_override : dx;
      const double v_max = lip_g + T * v_potential.structural_lipschitz() + 1.0;
      sol.vf = semi_lagrangian_solve(sol.oracle, sol.grid, gb, vb, T, dt, v_max,
                                     times);
    }
    sol.scheme_tol = scheme_tolerance(sol.vf, lip_g) * config.tol_scale;
    report.levels.push_back({n, sol.vf.solver, sol.grid->dx(), sol.vf.dt,
                             sol.grid->node_count(), sol.scheme_tol});
    sols.emplace(n, std::move(sol));
  }

  // constants of the Prop-5.1 estimates
  const double c_hamiltonian = 0.5 * lip_g * lip_g + max_v_abs;
  const double k_lipschitz = std::sqrt(6.0 * c_hamiltonian + 2.0 * max_v_plus);
  report.lipschitz_k = k_lipschitz;

  const int finest = *std::max_element(n_levels.begin(), n_levels.end());
  const LevelSolution& finest_sol = sols.at(finest);
  report.tol_conv = config.tol_conv > 0.0
                        ? config.tol_conv
                        : 4.0 * finest_sol.scheme_tol;

  char namebuf[128];
  for (int m : m_levels) {
    const LevelSolution& base = sols.at(m);
    // query set: level-m grid nodes, mapped into each finer level
    const std::vector<NetworkPoint>& qnodes = base.grid->nodes();
    const int nq = static_cast<int>(qnodes.size());
    std::vector<Point> qcoords(nq);
    for (int i = 0; i < nq; ++i) qcoords[i] = base.grid->network().embed(qnodes[i]);

    // u_n sampled at (times x query nodes) per level n >= m
    std::map<int, std::vector<std::vector<double>>> samples;
    for (int n : n_levels) {
      if (n < m) continue;
      const LevelSolution& sol = sols.at(n);
      const double tol = 1e3 * sol.grid->network().geom_tolerance();
      std::vector<NetworkPoint> mapped(nq);
      for (int i = 0; i < nq; ++i) {
        try {
          mapped[i] = sol.grid->network().locate_point(qcoords[i], tol);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::NotOnNetwork)
            throw Error(ErrorCode::GridMismatch,
                        "level-" + std::to_string(m) +
                            " node missing from level " + std::to_string(n) +
                            " (nesting violated?)");
          throw;
        }
      }
      std::vector<std::vector<double>> vals(times.size(),
                                            std::vector<double>(nq));
      if (sol.vf.solver == "hopflax") {
        const std::vector<double>& g0 = sol.vf.values[0];
        const BoundField gb(g, sol.oracle);
        for (int i = 0; i < nq; ++i) vals[0][i] = gb(mapped[i]);
        for (std::size_t ti = 1; ti < times.size(); ++ti)
          for (int i = 0; i < nq; ++i)
            vals[ti][i] = hopf_lax_value(*sol.oracle, *sol.grid, g0, times[ti],
                                         mapped[i]);
      } else {
        for (std::size_t ti = 0; ti < times.size(); ++ti)
          for (int i = 0; i < nq; ++i)
            vals[ti][i] = evaluate(sol.vf, times[ti], mapped[i]);
      }
      samples.emplace(n, std::move(vals));
    }

    // (a) monotone decrease in n at shared points
    {
      double worst = 0.0;
      const std::vector<std::vector<double>>* prev = nullptr;
      for (int n : n_levels) {
        if (n < m) continue;
        const auto& cur = samples.at(n);
        if (prev) {
          for (std::size_t ti = 0; ti < times.size(); ++ti)
            for (int i = 0; i < nq; ++i)
              worst = std::max(worst, cur[ti][i] - (*prev)[ti][i]);
        }
        prev = &cur;
      }
      const double tol_mono = 2.0 * finest_sol.scheme_tol;
      std::snprintf(namebuf, sizeof(namebuf), "monotone_decrease_m%d", m);
      report.checks.push_back({namebuf, "u_{n+1} <= u_n on shared grid",
                               tol_mono, worst, worst <= tol_mono});
    }

    // (b) uniform Lipschitz bound with the level-independent K
    for (int n : n_levels) {
      if (n < m) continue;
      const LevelSolution& sol = sols.at(n);
      const auto& vals = samples.at(n);
      const double tol = 1e3 * sol.grid->network().geom_tolerance();
      std::vector<NetworkPoint> mapped(nq);
      for (int i = 0; i < nq; ++i)
        mapped[i] = sol.grid->network().locate_point(qcoords[i], tol);
      std::mt19937 rng(777);
      std::uniform_int_distribution<int> pick(0, nq - 1);
      const int pair_count = std::min(2000, nq * (nq - 1) / 2 + 1);
      double worst = 0.0;
      for (int k = 0; k < pair_count; ++k) {
        const int i = pick(rng);
        const int j = pick(rng);
        if (i == j) continue;
        const double d = sol.oracle->distance(mapped[i], mapped[j]);
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
          const double gap = std::abs(vals[ti][i] - vals[ti][j]);
          worst = std::max(worst, gap - 2.0 * k_lipschitz * d);
        }
      }
      const double slack = 2.0 * sol.scheme_tol;
      std::snprintf(namebuf, sizeof(namebuf), "lipschitz_m%d_n%d", m, n);
      report.checks.push_back({namebuf, "|u(t,y)-u(t,x)| <= 2K delta_n(x,y)",
                               slack, worst, worst <= slack});
    }

    // (c) initial-time sandwich at the first stored times
    for (int n : n_levels) {
      if (n < m) continue;
      const LevelSolution& sol = sols.at(n);
      const auto& vals = samples.at(n);
      double worst = 0.0;
      const std::size_t t_count = std::min<std::size_t>(4, times.size());
      for (std::size_t ti = 1; ti < t_count; ++ti)
        for (int i = 0; i < nq; ++i) {
          const double gap = std::abs(vals[ti][i] - vals[0][i]);
          worst = std::max(worst, gap - c_hamiltonian * times[ti]);
        }
      const double slack = 2.0 * sol.scheme_tol;
      std::snprintf(namebuf, sizeof(namebuf), "initial_sandwich_m%d_n%d", m, n);
      report.checks.push_back({namebuf, "-Ct+g <= u(t,.) <= Ct+g", slack, worst,
                               worst <= slack});
    }

    // (d) sup-difference column against the finest-level proxy
    {
      const auto& proxy = samples.at(finest);
      std::vector<double> column;
      std::vector<int> column_n;
      for (int n : n_levels) {
        if (n < m) continue;
        const auto& vals = samples.at(n);
        double sup = 0.0;
        for (std::size_t ti = 0; ti < times.size(); ++ti)
          for (int i = 0; i < nq; ++i)
            sup = std::max(sup, std::abs(vals[ti][i] - proxy[ti][i]));
        report.table.push_back({m, n, sup});
        column.push_back(sup);
        column_n.push_back(n);
      }
      bool nonincreasing = true;
      for (std::size_t i = 0; i + 1 < column.size(); ++i)
        if (column[i + 1] > column[i] + 1e-12) nonincreasing = false;
      // decide on the second-to-last row: the last one is identically zero
      const double last_real =
          column.size() >= 2 ? column[column.size() - 2] : 0.0;
      report.converged[m] = nonincreasing && last_real <= report.tol_conv;

      // exploratory rate: log-log fit of sup-diff against d_H(N^n, N^N)
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        if (column[i] <= 0.0) continue;
        const double h = 1e-2 * seq.levels[finest].diameter();
        const HausdorffReport hr =
            hausdorff_distance(seq.levels[column_n[i]], seq.levels[finest], h);
        if (hr.value <= 0.0) continue;
        xs.push_back(std::log(hr.value));
        ys.push_back(std::log(column[i]));
      }
      if (xs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          sx += xs[i];
          sy += ys[i];
          sxx += xs[i] * xs[i];
          sxy += xs[i] * ys[i];
        }
        const double k = static_cast<double>(xs.size());
        const double denom = k * sxx - sx * sx;
        if (denom != 0.0) report.rate_estimate[m] = (k * sxy - sx * sy) / denom;
      }
    }
  }
  return report;
}

ComparisonReport check_comparison_pair(const ValueFunction& vf_sub,
                                       const ValueFunction& vf_super,
                                       double tol) {
  if (vf_sub.grid != vf_super.grid || vf_sub.times != vf_super.times)
    throw Error(ErrorCode::GridMismatch,
                "comparison requires identical grids and time ladders");
  ComparisonReport r;
  for (std::size_t ti = 0; ti < vf_sub.times.size(); ++ti)
    for (std::size_t i = 0; i < vf_sub.values[ti].size(); ++i)
      r.max_violation = std::max(
          r.max_violation, vf_sub.values[ti][i] - vf_super.values[ti][i]);
  r.pass = r.max_violation <= tol;
  return r;
}

std::string StabilityReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["g"] = nlohmann::json::parse(g_spec);
  j["V"] = nlohmann::json::parse(v_spec);
  j["T"] = T;
  j["lipschitz_k"] = lipschitz_k;
  j["tol_conv"] = tol_conv;
  j["levels"] = nlohmann::json::array();
  for (const LevelMeta& l : levels)
    j["levels"].push_back({{"level", l.level},
                           {"solver", l.solver},
                           {"dx", l.dx},
                           {"dt", l.dt},
                           {"nodes", l.nodes},
                           {"scheme_tol", l.scheme_tol}});
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"reference", c.reference},
                           {"bound", c.bound},
                           {"measured", c.measured},
                           {"pass", c.pass}});
  j["convergence"] = nlohmann::json::array();
  for (const ConvergenceEntry& e : table)
    j["convergence"].push_back({{"m", e.m}, {"n", e.n}, {"sup_diff", e.sup_diff}});
  j["converged"] = nlohmann::json::object();
  for (const auto& [m, ok] : converged)
    j["converged"][std::to_string(m)] = ok;
  j["rate_estimate"] = nlohmann::json::object();
  for (const auto& [m, r] : rate_estimate)
    j["rate_estimate"][std::to_string(m)] = r;
  return j.dump(2) + "\n";
}

std::string StabilityReport::table_csv() const {
  std::ostringstream os;
  os << "m,n,sup_diff\n";
  char buf[80];
  for (const ConvergenceEntry& e : table) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", e.m, e.n, e.sup_diff);
    os << buf;
  }
  return os.str();
}

void emit_report(const StabilityReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream js(fs::path(dir) / "report.json");
  std::ofstream csv(fs::path(dir) / "convergence.csv");
  if (!js || !csv) throw Error(ErrorCode::IoError, "cannot write into " + dir);
  js << report.to_json();
  csv << report.table_csv();
}

}  // namespace nethj
