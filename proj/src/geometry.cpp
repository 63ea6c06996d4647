#include "nethj/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace nethj {

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Point add(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Point scale(const Point& a, double k) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

Point lerp(const Point& a, const Point& b, double t) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * (b[i] - a[i]);
  return r;
}

double closest_param_on_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = sub(b, a);
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return 0.0;
  const double t = dot(sub(p, a), ab) / len2;
  return std::clamp(t, 0.0, 1.0);
}

double point_segment_dist(const Point& p, const Point& a, const Point& b) {
  const double t = closest_param_on_segment(p, a, b);
  return dist(p, lerp(a, b, t));
}

SegmentClosest segment_segment_closest(const Point& a0, const Point& a1,
                                       const Point& b0, const Point& b1) {
  const Point d1 = sub(a1, a0);
  const Point d2 = sub(b1, b0);
  const Point r = sub(a0, b0);
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);

  double s = 0.0, t = 0.0;
  if (a == 0.0 && e == 0.0) {
    // both degenerate
  } else if (a == 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e == 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      if (denom != 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  const double d = dist(lerp(a0, a1, s), lerp(b0, b1, t));
  return {s, t, d};
}

bool segment_contains_segment(const Point& a0, const Point& a1,
                              const Point& b0, const Point& b1, double eps) {
  return point_segment_dist(b0, a0, a1) <= eps &&
         point_segment_dist(b1, a0, a1) <= eps;
}

}  // namespace nethj
