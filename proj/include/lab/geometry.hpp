#pragma once

#include "lab/vec.hpp"

namespace lab {

// Absolute tolerance on |x|^2 - |sigma x|^2 used to call a point "on the
// mirror". Keeps the side classification stable for paired cells.
inline constexpr double kSideTol = 1e-12;

enum class Side { Positive, Boundary, Negative };

// Euclidean reflection across the hyperplane <z,u> = r/2.
inline Point reflect(const PolarParam& w, const Point& x) {
  double t = w.r - 2.0 * dot(x, w.u.vec());
  Point y = x;
  for (int i = 0; i < x.dim(); ++i) y[i] += t * w.u[i];
  return y;
}

// Sign of |sigma x|^2 - |x|^2 = r(r - 2<x,u>). Positive means x is at least
// as close to the origin as its mirror image.
Side half_space_side(const PolarParam& w, const Point& x);

// Folding map: fixes the half-space containing the origin, reflects the
// other, so points move weakly toward the origin (when r > 0). The r = 0
// map fixes {<x,u> <= 0} and reflects the rest. Sides are exact here (no
// kSideTol band): folds with arbitrarily small radii must still act.
Point fold(const PolarParam& w, const Point& x);

// Lebesgue volume of the radius-rho ball in R^d.
double ball_volume(int d, double rho);

// Surface measure of the unit sphere in R^d, equal to d * ball_volume(d, 1).
double sphere_area(int d);

// Angular distance on the sphere, via the chord (stable near 0 and pi).
double angular_distance(const Direction& a, const Direction& b);

// Point on the great circle from v toward target, at angular distance
// min(step, d(v, target)); exactly target once within step.
// Throws AntipodalInput when v = -target (the circle is not unique).
Direction great_circle_step(const Direction& v, const Direction& target,
                            double step);

}  // namespace lab
