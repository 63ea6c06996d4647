#include "nethj/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "nethj/error.hpp"

namespace nethj {

FieldSpec FieldSpec::constant(double c) {
  FieldSpec s;
  s.kind = Kind::Constant;
  s.value = c;
  return s;
}

FieldSpec FieldSpec::coordinate(int axis) {
  FieldSpec s;
  s.kind = Kind::Coordinate;
  s.axis = axis;
  return s;
}

FieldSpec FieldSpec::euclid_dist_to(Point anchor, double scale) {
  FieldSpec s;
  s.kind = Kind::EuclidDist;
  s.anchor = std::move(anchor);
  s.scale = scale;
  return s;
}

FieldSpec FieldSpec::intrinsic_dist_to(Point anchor, double scale) {
  FieldSpec s;
  s.kind = Kind::IntrinsicDist;
  s.anchor = std::move(anchor);
  s.scale = scale;
  return s;
}

FieldSpec FieldSpec::sum(std::vector<FieldSpec> terms) {
  FieldSpec s;
  s.kind = Kind::Sum;
  s.children = std::move(terms);
  return s;
}

FieldSpec FieldSpec::min(std::vector<FieldSpec> terms) {
  FieldSpec s;
  s.kind = Kind::Min;
  s.children = std::move(terms);
  return s;
}

FieldSpec FieldSpec::max(std::vector<FieldSpec> terms) {
  FieldSpec s;
  s.kind = Kind::Max;
  s.children = std::move(terms);
  return s;
}

double FieldSpec::structural_lipschitz() const {
  switch (kind) {
    case Kind::Constant:
      return 0.0;
    case Kind::Coordinate:
      return 1.0;  // |x_k - y_k| <= d_E <= delta
    case Kind::EuclidDist:
    case Kind::IntrinsicDist:
      return std::abs(scale);
    case Kind::Sum: {
      double s = 0.0;
      for (const FieldSpec& c : children) s += c.structural_lipschitz();
      return s;
    }
    case Kind::Min:
    case Kind::Max: {
      double s = 0.0;
      for (const FieldSpec& c : children)
        s = std::max(s, c.structural_lipschitz());
      return s;
    }
  }
  return 0.0;
}

bool FieldSpec::is_identically_zero() const {
  switch (kind) {
    case Kind::Constant:
      return value == 0.0;
    case Kind::Sum:
    case Kind::Min:
    case Kind::Max: {
      for (const FieldSpec& c : children)
        if (!c.is_identically_zero()) return false;
      return !children.empty() || kind == Kind::Sum;
    }
    default:
      return false;
  }
}

namespace {

const char* kind_name(FieldSpec::Kind k) {
  switch (k) {
    case FieldSpec::Kind::Constant: return "constant";
    case FieldSpec::Kind::Coordinate: return "coordinate";
    case FieldSpec::Kind::EuclidDist: return "euclid_dist_to";
    case FieldSpec::Kind::IntrinsicDist: return "intrinsic_dist_to";
    case FieldSpec::Kind::Sum: return "sum";
    case FieldSpec::Kind::Min: return "min";
    case FieldSpec::Kind::Max: return "max";
  }
  return "?";
}

nlohmann::json to_json(const FieldSpec& s) {
  nlohmann::json j;
  j["kind"] = kind_name(s.kind);
  switch (s.kind) {
    case FieldSpec::Kind::Constant:
      j["value"] = s.value;
      break;
    case FieldSpec::Kind::Coordinate:
      j["axis"] = s.axis;
      break;
    case FieldSpec::Kind::EuclidDist:
    case FieldSpec::Kind::IntrinsicDist:
      j["point"] = s.anchor;
      j["scale"] = s.scale;
      break;
    case FieldSpec::Kind::Sum:
    case FieldSpec::Kind::Min:
    case FieldSpec::Kind::Max: {
      nlohmann::json terms = nlohmann::json::array();
      for (const FieldSpec& c : s.children) terms.push_back(to_json(c));
      j["terms"] = terms;
      break;
    }
  }
  return j;
}

FieldSpec from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return FieldSpec::constant(j.at("value").get<double>());
  if (kind == "coordinate") return FieldSpec::coordinate(j.at("axis").get<int>());
  if (kind == "euclid_dist_to" || kind == "intrinsic_dist_to") {
    Point p = j.at("point").get<Point>();
    const double scale = j.value("scale", 1.0);
    return kind == "euclid_dist_to"
               ? FieldSpec::euclid_dist_to(std::move(p), scale)
               : FieldSpec::intrinsic_dist_to(std::move(p), scale);
  }
  if (kind == "sum" || kind == "min" || kind == "max") {
    std::vector<FieldSpec> terms;
    for (const auto& t : j.at("terms")) terms.push_back(from_json(t));
    if (terms.empty())
      throw Error(ErrorCode::ParseError, kind + " needs at least one term");
    if (kind == "sum") return FieldSpec::sum(std::move(terms));
    if (kind == "min") return FieldSpec::min(std::move(terms));
    return FieldSpec::max(std::move(terms));
  }
  throw Error(ErrorCode::ParseError, "unknown field kind: " + kind);
}

void collect_anchors(const FieldSpec& s, const EmbeddedNetwork& net,
                     std::vector<NetworkPoint>& out) {
  if (s.kind == FieldSpec::Kind::IntrinsicDist) {
    try {
      out.push_back(net.locate_point(s.anchor, net.geom_tolerance()));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotOnNetwork)
        throw Error(ErrorCode::AnchorNotOnLevel, e.what());
      throw;
    }
  }
  for (const FieldSpec& c : s.children) collect_anchors(c, net, out);
}

}  // namespace

FieldSpec FieldSpec::from_json_text(const std::string& text) {
  try {
    return from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string FieldSpec::to_json_text() const { return to_json(*this).dump(); }

BoundField::BoundField(FieldSpec spec, std::shared_ptr<const MetricOracle> oracle)
    : spec_(std::move(spec)), oracle_(std::move(oracle)) {
  collect_anchors(spec_, oracle_->network(), anchors_);
}

double BoundField::eval(const FieldSpec& s, const NetworkPoint& p,
                        const Point& xyz, std::size_t& anchor_idx) const {
  switch (s.kind) {
    case FieldSpec::Kind::Constant:
      return s.value;
    case FieldSpec::Kind::Coordinate:
      return xyz.at(s.axis);
    case FieldSpec::Kind::EuclidDist:
      return s.scale * dist(xyz, s.anchor);
    case FieldSpec::Kind::IntrinsicDist:
      return s.scale * oracle_->distance(anchors_[anchor_idx++], p);
    case FieldSpec::Kind::Sum: {
      double v = 0.0;
      for (const FieldSpec& c : s.children) v += eval(c, p, xyz, anchor_idx);
      return v;
    }
    case FieldSpec::Kind::Min: {
      double v = std::numeric_limits<double>::infinity();
      for (const FieldSpec& c : s.children)
        v = std::min(v, eval(c, p, xyz, anchor_idx));
      return v;
    }
    case FieldSpec::Kind::Max: {
      double v = -std::numeric_limits<double>::infinity();
      for (const FieldSpec& c : s.children)
        v = std::max(v, eval(c, p, xyz, anchor_idx));
      return v;
    }
  }
  return 0.0;
}

double BoundField::operator()(const NetworkPoint& p) const {
  std::size_t anchor_idx = 0;
  return eval(spec_, p, oracle_->network().embed(p), anchor_idx);
}

LipschitzEstimate lipschitz_constant(const FieldSpec& spec,
                                     std::shared_ptr<const MetricOracle> oracle) {
  LipschitzEstimate est;
  est.structural = spec.structural_lipschitz();

  const BoundField f(spec, oracle);
  const EmbeddedNetwork& net = oracle->network();
  std::mt19937 rng(20240901);
  std::uniform_int_distribution<int> pick_edge(0, net.edge_count() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto sample = [&]() {
    const int e = pick_edge(rng);
    return NetworkPoint{e, unit(rng) * net.edge_length(e)};
  };
  for (int k = 0; k < 2000; ++k) {
    const NetworkPoint p = sample();
    const NetworkPoint q = sample();
    const double d = oracle->distance(p, q);
    if (d <= net.geom_tolerance()) continue;
    est.empirical = std::max(est.empirical, std::abs(f(p) - f(q)) / d);
  }
  return est;
}

}  // namespace nethj
