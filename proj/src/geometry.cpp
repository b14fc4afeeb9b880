#include "lab/geometry.hpp"

#include <cmath>

#include "lab/errors.hpp"

namespace lab {

Side half_space_side(const PolarParam& w, const Point& x) {
  // |sigma x|^2 - |x|^2 expands exactly to r(r - 2<x,u>); evaluating the
  // product avoids the cancellation of subtracting two squared norms.
  double t = w.r - 2.0 * dot(x, w.u.vec());
  double diff = w.r * t;
  if (std::abs(diff) <= kSideTol) return Side::Boundary;
  return diff > 0.0 ? Side::Positive : Side::Negative;
}

Point fold(const PolarParam& w, const Point& x) {
  if (w.r > 0.0) {
    // Exact side, no tolerance: a fold with a vanishing radius must still
    // act, or a subsequent reflection with the same direction and a larger
    // radius would find the point on the moving side.
    return w.r - 2.0 * dot(x, w.u.vec()) < 0.0 ? reflect(w, x) : x;
  }
  // r = 0: both half-spaces touch the origin; the fixed one is the side with
  // u as exterior normal, {<x,u> <= 0}.
  return dot(x, w.u.vec()) > 0.0 ? reflect(w, x) : x;
}

double ball_volume(int d, double rho) {
  return std::pow(M_PI, 0.5 * d) * std::pow(rho, d) /
         std::tgamma(0.5 * d + 1.0);
}

double sphere_area(int d) { return d * ball_volume(d, 1.0); }

double angular_distance(const Direction& a, const Direction& b) {
  double chord = (a.vec() - b.vec()).norm();
  return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

Direction great_circle_step(const Direction& v, const Direction& target,
                            double step) {
  double theta = angular_distance(v, target);
  if (theta <= step) return target;
  if (theta >= M_PI - 1e-8)
    throw AntipodalInput("great_circle_step: antipodal endpoints");
  // Slerp; the constructor renormalizes away the remaining rounding.
  double s = std::sin(theta);
  double a = std::sin(theta - step) / s;
  double b = std::sin(step) / s;
  return Direction(a * v.vec() + b * target.vec());
}

}  // namespace lab
