#pragma once

#include "sdopart/model.hpp"

namespace sdopart::testing {

// Closed-form strictly complementary solution of the elliptope family on (-1/2, 3/2).
inline KKTPoint elliptope_exact(double e) {
  const double a = 0.5 - e, z = 1.0 - 2.0 * (e - 0.5) * (e - 0.5), t = 2.0 * e - 1.0;
  Matrix x(3, 3), s(3, 3);
  x << 1, a, -a, a, 1, z, -a, z, 1;
  s << t * t, t, -t, t, 1, -1, -t, -1, 1;
  return KKTPoint(svec_upper(x), Vector{{-t * t, -1.0, -1.0}}, svec_upper(s));
}

// The maximally complementary solution at e = 3/2.
inline KKTPoint elliptope_at_three_halves() {
  Matrix x(3, 3), s(3, 3);
  x << 1, -1, 1, -1, 1, -1, 1, -1, 1;
  s << 4, 2, -2, 2, 1, -1, -2, -1, 1;
  return KKTPoint(svec_upper(x), Vector{{-4.0, -1.0, -1.0}}, svec_upper(s));
}

inline double x12(const KKTPoint& v) { return v.X().matrix()(0, 1); }

}  // namespace sdopart::testing
