#include "lab/ellipsoid.hpp"

#include <algorithm>
#include <cmath>

#include "lab/errors.hpp"

namespace lab {

EllipsoidFunction make_ellipsoid(const Mat& m) {
  const int d = m.dim();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::fabs(m.at(i, j) - m.at(j, i)) > 1e-10)
        throw NotPositiveDefinite("matrix not symmetric");
  Mat s = m;
  s.symmetrize();
  const EigenSym eig = jacobi_eigen(s);
  if (eig.values[0] <= 0.0)
    throw NotPositiveDefinite("matrix not positive definite");
  return EllipsoidFunction{s};
}

double ellipsoid_value(const EllipsoidFunction& e, const Point& x) {
  return std::max(0.0, 1.0 - e.M.quad(x));
}

EllipsoidFunction sdr_ellipsoid(const EllipsoidFunction& e) {
  const int d = e.M.dim();
  const double lam = std::pow(det(e.M), 1.0 / d);
  return EllipsoidFunction{Mat::scaled_identity(d, lam)};
}

double ellipsoid_ball_sup_distance(const EllipsoidFunction& e, double lam) {
  const EigenSym eig = jacobi_eigen(e.M);
  const double lmin = eig.values[0];
  const double lmax = eig.values[e.M.dim() - 1];
  double best = 0.0;
  for (double l : {lmin, lmax}) {
    const double lo = std::min(l, lam);
    const double hi = std::max(l, lam);
    best = std::max(best, 1.0 - lo / hi);
  }
  return best;
}

double ellipsoid_sup_to_sdr(const EllipsoidFunction& e) {
  const int d = e.M.dim();
  return ellipsoid_ball_sup_distance(e, std::pow(det(e.M), 1.0 / d));
}

GridFunction ellipsoid_to_grid(const Lattice& lat, const EllipsoidFunction& e) {
  GridFunction f(lat);
  const std::size_t total = lat.cell_count();
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    const Point x = lat.center(idx);
    f.v[i] = std::max(0.0, 1.0 - e.M.quad(x));
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  return f;
}

}  // namespace lab
