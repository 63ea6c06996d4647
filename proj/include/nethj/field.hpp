#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nethj/metric.hpp"
#include "nethj/network.hpp"

namespace nethj {

// Declarative description of a Lipschitz scalar field on a network:
// constants, ambient coordinates, scaled Euclidean or intrinsic distances,
// and sums / pointwise minima / maxima of sub-specs. Serialization is JSON
// (kind + params, nested for combinators). Intrinsic anchors are stored as
// ambient coordinates and re-resolved against each level's metric.
struct FieldSpec {
  enum class Kind { Constant, Coordinate, EuclidDist, IntrinsicDist, Sum, Min, Max };

  Kind kind = Kind::Constant;
  double value = 0.0;                // Constant
  int axis = 0;                      // Coordinate
  Point anchor;                      // EuclidDist / IntrinsicDist
  double scale = 1.0;                // EuclidDist / IntrinsicDist
  std::vector<FieldSpec> children;   // Sum / Min / Max

  static FieldSpec constant(double c);
  static FieldSpec coordinate(int axis);
  static FieldSpec euclid_dist_to(Point anchor, double scale = 1.0);
  static FieldSpec intrinsic_dist_to(Point anchor, double scale = 1.0);
  static FieldSpec sum(std::vector<FieldSpec> terms);
  static FieldSpec min(std::vector<FieldSpec> terms);
  static FieldSpec max(std::vector<FieldSpec> terms);

  // Structural Lipschitz bound against the intrinsic metric: constants 0,
  // coordinates 1, scaled distances |scale|, sums add, min/max take the max.
  double structural_lipschitz() const;

  bool is_identically_zero() const;

  static FieldSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// A spec bound to one network level: intrinsic anchors resolved by
// locate_point against that level (throws AnchorNotOnLevel when an anchor
// is farther than the geometric tolerance from the level). This is the
// restriction g|_{N^n} of the ambient datum.
class BoundField {
 public:
  BoundField(FieldSpec spec, std::shared_ptr<const MetricOracle> oracle);

  double operator()(const NetworkPoint& p) const;
  const FieldSpec& spec() const { return spec_; }
  const MetricOracle& oracle() const { return *oracle_; }

 private:
  double eval(const FieldSpec& s, const NetworkPoint& p, const Point& xyz,
              std::size_t& anchor_idx) const;

  FieldSpec spec_;
  std::shared_ptr<const MetricOracle> oracle_;
  std::vector<NetworkPoint> anchors_;  // resolved, in spec traversal order
};

inline BoundField restrict_initial(const FieldSpec& spec,
                                   std::shared_ptr<const MetricOracle> oracle) {
  return BoundField(spec, std::move(oracle));
}

struct LipschitzEstimate {
  double structural = 0.0;  // certified upper bound
  double empirical = 0.0;   // sampled difference-quotient lower bound
};

// Structural bound plus an empirical lower bound from sampled quotients;
// the empirical value never exceeds the structural one (up to roundoff).
LipschitzEstimate lipschitz_constant(const FieldSpec& spec,
                                     std::shared_ptr<const MetricOracle> oracle);

}  // namespace nethj
