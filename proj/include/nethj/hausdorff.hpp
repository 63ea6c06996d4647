#pragma once

#include <string>
#include <vector>

#include "nethj/network.hpp"

namespace nethj {

struct HausdorffReport {
  double directed_ab = 0.0;
  double directed_ba = 0.0;
  double value = 0.0;
  // Sampled sups undershoot the true sup by at most this much (the distance
  // field is 1-Lipschitz along the sampled set).
  double certified_error = 0.0;

  std::string to_json() const;
};

// sup over points of A (sampled at arclength spacing <= h, endpoints always
// included) of the Euclidean distance to B. Returns {value, h/2}.
std::pair<double, double> directed_hausdorff(const EmbeddedNetwork& a,
                                             const EmbeddedNetwork& b, double h);

HausdorffReport hausdorff_distance(const EmbeddedNetwork& a,
                                   const EmbeddedNetwork& b, double h);

struct ConvergenceRow {
  int n = 0;
  double d_h = 0.0;
  double certificate = 0.0;
  // set when this row exceeds the previous one by more than the combined
  // certificates
  bool monotonicity_flag = false;
};

// d_H(N^n, N^N) against the finest level for every n; flags levels violating
// monotone decrease beyond the certificates. Throws EmptySequence.
std::vector<ConvergenceRow> check_hausdorff_convergence(
    const std::vector<EmbeddedNetwork>& seq, double h);

std::string convergence_table_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace nethj
