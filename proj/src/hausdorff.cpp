#include "nethj/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nethj/error.hpp"

namespace nethj {

std::string HausdorffReport::to_json() const {
  nlohmann::json j;
  j["directed_ab"] = directed_ab;
  j["directed_ba"] = directed_ba;
  j["value"] = value;
  j["certified_error"] = certified_error;
  return j.dump(2) + "\n";
}

std::pair<double, double> directed_hausdorff(const EmbeddedNetwork& a,
                                             const EmbeddedNetwork& b, double h) {
  if (h <= 0.0)
    throw Error(ErrorCode::ParameterOutOfRange, "sampling step must be positive");
  double sup = 0.0;
  for (int e = 0; e < a.edge_count(); ++e) {
    const Point& p0 = a.vertices()[a.edges()[e][0]];
    const Point& p1 = a.vertices()[a.edges()[e][1]];
    const double len = a.edge_length(e);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / h)));
    for (int k = 0; k <= steps; ++k) {
      const Point q = lerp(p0, p1, static_cast<double>(k) / steps);
      sup = std::max(sup, b.dist_to(q));
    }
  }
  return {sup, h / 2.0};
}

HausdorffReport hausdorff_distance(const EmbeddedNetwork& a,
                                   const EmbeddedNetwork& b, double h) {
  HausdorffReport r;
  auto [ab, cert_ab] = directed_hausdorff(a, b, h);
  auto [ba, cert_ba] = directed_hausdorff(b, a, h);
  r.directed_ab = ab;
  r.directed_ba = ba;
  r.value = std::max(ab, ba);
  r.certified_error = std::max(cert_ab, cert_ba);
  return r;
}

std::vector<ConvergenceRow> check_hausdorff_convergence(
    const std::vector<EmbeddedNetwork>& seq, double h) {
  if (seq.empty()) throw Error(ErrorCode::EmptySequence, "no networks given");
  const EmbeddedNetwork& finest = seq.back();
  std::vector<ConvergenceRow> rows;
  rows.reserve(seq.size());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const HausdorffReport rep = hausdorff_distance(seq[n], finest, h);
    ConvergenceRow row;
    row.n = static_cast<int>(n);
    row.d_h = rep.value;
    row.certificate = rep.certified_error;
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.monotonicity_flag = row.d_h > prev.d_h + prev.certificate + row.certificate;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string convergence_table_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "n,d_H,certificate\n";
  for (const ConvergenceRow& r : rows) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", r.n, r.d_h, r.certificate);
    os << buf;
  }
  return os.str();
}

}  // namespace nethj
