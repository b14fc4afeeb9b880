#pragma once

#include <algorithm>
#include <cmath>

#include "lab/geometry.hpp"
#include "lab/grid.hpp"
#include "lab/vec.hpp"

namespace lab {

// f(x) = [1 - |x - apex|]^+, an exact representation closed under
// polarization: the reflection acts on the apex alone.
struct ConeFunction {
  Point apex;
};

inline double cone_value(const ConeFunction& c, const Point& x) {
  return std::max(0.0, 1.0 - (x - c.apex).norm());
}

inline ConeFunction polarize_cone(const ConeFunction& c, const PolarParam& w) {
  return ConeFunction{fold(w, c.apex)};
}

inline ConeFunction sdr_cone(const ConeFunction& c) {
  Point o(c.apex.dim());
  return ConeFunction{o};
}

// Sup distance between unit cones with apexes a and b: min{|a-b|, 1}.
inline double cone_sup_distance(const ConeFunction& a, const ConeFunction& b) {
  return std::min((a.apex - b.apex).norm(), 1.0);
}

// Scaled cone [height - |x-apex|]^+ sampled on the lattice (slope 1, peak
// `height`); height=1 gives the exact representation above.
inline GridFunction cone_to_grid(const Lattice& lat, const Point& apex,
                                 double height = 1.0) {
  GridFunction f(lat);
  const std::size_t total = lat.cell_count();
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    const Point x = lat.center(idx);
    f.v[i] = std::max(0.0, height - (x - apex).norm());
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  return f;
}

}  // namespace lab
