#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nethj/network.hpp"

namespace nethj {

// Nested sequence of networks indexed by level.
struct ExpandingSequence {
  std::string kind;         // dyadic | sierpinski | custom
  std::string params_json;  // generator parameters, serialized
  std::vector<EmbeddedNetwork> levels;
};

// Example: vertices v_0 = 0, v_i = 1 - 2^-i in R^1, consecutive edges.
// Requires n >= 1 (the n = 0 set has no edges and is not a network).
EmbeddedNetwork dyadic_network(int n);

inline std::array<Point, 3> default_sierpinski_corners() {
  return {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.5, std::sqrt(3.0) / 2.0}};
}

// Level-n prefractal of the gasket spanned by three non-collinear corners:
// edges are the images of the triangle sides under all n-fold compositions of
// the midpoint contractions toward the corners. Vertices are computed in
// exact dyadic-rational barycentric coordinates and only then embedded.
EmbeddedNetwork sierpinski_prefractal(int n, const std::array<Point, 3>& corners);

ExpandingSequence dyadic_sequence(int depth);
ExpandingSequence sierpinski_sequence(int depth, const std::array<Point, 3>& corners);

enum class ExpandMode { FixedR, ShrinkingR };

struct VertexCertificate {
  Point position;
  int first_level = 0;   // first level whose vertex set contains the point
  int level_m = -1;      // stabilization level of the certificate, -1 if none
  double radius = 0.0;   // largest certified radius (fixed_r) or min margin
                         // over r_l (shrinking_r)
  bool certified = false;
  bool vacuous = false;  // vertex only present at the finest level
  // witness of the failure, when not certified
  int witness_level = -1;
  Point witness_point;
};

struct ExpandingReport {
  ExpandMode mode = ExpandMode::FixedR;
  bool nesting_ok = false;
  std::string nesting_witness;  // empty when nesting_ok
  bool stabilization_ok = false;
  std::vector<VertexCertificate> certificates;

  bool ok() const { return nesting_ok && stabilization_ok; }
};

// Certifies the expanding structure of a sequence: (a) each level's edges
// are tiled by the next level's and vertex sets nest; (b) per-vertex
// stabilization radii, either a fixed r or the level-dependent
// r_l = r_scale * 2^-(l+1). r_scale <= 0 selects the level-0 diameter.
ExpandingReport verify_expanding(const std::vector<EmbeddedNetwork>& levels,
                                 ExpandMode mode, double r_scale = 0.0);

// Writes one canonical network file per level plus manifest.json; loads back
// the same sequence. Loading validates every level.
void save_sequence(const ExpandingSequence& seq, const std::string& dir);
ExpandingSequence load_sequence(const std::string& manifest_path);

}  // namespace nethj
