#pragma once

#include <cstddef>
#include <vector>

namespace nethj {

// A point of R^d. All geometry below is dimension-generic.
using Point = std::vector<double>;

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double dist(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point add(const Point& a, const Point& b);
Point scale(const Point& a, double k);
Point lerp(const Point& a, const Point& b, double t);

// Closest parameter t in [0,1] of the segment [a,b] to point p.
double closest_param_on_segment(const Point& p, const Point& a, const Point& b);

double point_segment_dist(const Point& p, const Point& a, const Point& b);

struct SegmentClosest {
  double s;         // parameter on [a0,a1]
  double t;         // parameter on [b0,b1]
  double distance;  // Euclidean distance between the closest points
};

// Closest-point pair between two closed segments (Eberly's clamped
// quadratic minimization; works in any dimension).
SegmentClosest segment_segment_closest(const Point& a0, const Point& a1,
                                       const Point& b0, const Point& b1);

// True when both endpoints of [b0,b1] lie within eps of the segment [a0,a1];
// for collinear sub-segments this certifies geometric containment.
bool segment_contains_segment(const Point& a0, const Point& a1,
                              const Point& b0, const Point& b1, double eps);

}  // namespace nethj
