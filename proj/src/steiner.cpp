#include "lab/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "lab/errors.hpp"
#include "lab/geometry.hpp"

namespace lab {

namespace {

// Positions of a line of n cells ordered by distance to the line center,
// ties toward the lower index. Integer distance key |2i+1-n| makes the order
// exact: the two cells of a symmetric pair tie and the left one wins.
std::vector<int> center_order(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [n](int a, int b) {
    const long long qa = std::llabs(2LL * a + 1 - n);
    const long long qb = std::llabs(2LL * b + 1 - n);
    if (qa != qb) return qa < qb;
    return a < b;
  });
  return order;
}

int axis_of(const Direction& u) {
  const int d = u.dim();
  int axis = -1;
  for (int k = 0; k < d; ++k) {
    if (std::fabs(std::fabs(u[k]) - 1.0) <= 1e-12)
      axis = k;
    else if (std::fabs(u[k]) > 1e-12)
      return -1;
  }
  return axis;
}

template <typename T>
void symmetrize_lines(const Lattice& lat, int axis, std::vector<T>& vals) {
  const int n = lat.n;
  const std::vector<int> order = center_order(n);
  std::size_t stride = 1;
  for (int k = lat.d - 1; k > axis; --k) stride *= static_cast<std::size_t>(n);
  const std::size_t blocks = lat.cell_count() / static_cast<std::size_t>(n);
  std::vector<T> line(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t outer = b / stride;
    const std::size_t inner = b % stride;
    const std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
    for (int i = 0; i < n; ++i)
      line[i] = vals[base + static_cast<std::size_t>(i) * stride];
    std::sort(line.begin(), line.end(), std::greater<T>());
    for (int i = 0; i < n; ++i)
      vals[base + static_cast<std::size_t>(order[i]) * stride] = line[i];
  }
}

// Householder map exchanging u and e0 (an involution, so it is its own
// inverse for the rotate-resample round trip).
struct AxisSwap {
  Vec w;
  bool trivial = false;

  explicit AxisSwap(const Direction& u) {
    const int d = u.dim();
    Vec diff = u.vec() - basis_vec(d, 0);
    if (diff.norm() <= 1e-14) {
      trivial = true;
      w = basis_vec(d, 0);
      return;
    }
    w = (1.0 / diff.norm()) * diff;
  }

  Point apply(const Point& x) const {
    if (trivial) return x;
    return x - (2.0 * dot(x, w)) * w;
  }
};

}  // namespace

GridFunction steiner_grid(const GridFunction& f, const Direction& u) {
  const int axis = axis_of(u);
  if (axis >= 0) {
    GridFunction out = f;
    symmetrize_lines(out.lat, axis, out.v);
    return out;
  }
  // Rotate u to axis 0, resample, symmetrize exactly, rotate back.
  const AxisSwap rot(u);
  const Lattice& lat = f.lat;
  GridFunction tmp(lat);
  const std::size_t total = lat.cell_count();
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    tmp.v[i] = f.value_at(rot.apply(lat.center(idx)));
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  symmetrize_lines(lat, 0, tmp.v);
  GridFunction out(lat);
  int jdx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    out.v[i] = tmp.value_at(rot.apply(lat.center(jdx)));
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++jdx[k] < lat.n) break;
      jdx[k] = 0;
    }
  }
  return out;
}

GridSet steiner_set(const GridSet& a, const Direction& u) {
  const int axis = axis_of(u);
  if (axis >= 0) {
    GridSet out = a;
    symmetrize_lines(out.lat, axis, out.m);
    return out;
  }
  return threshold_set(steiner_grid(indicator(a), u), 0.5);
}

Mat steiner_ellipsoid(const Mat& m, const Direction& u) {
  const int d = m.dim();
  const EigenSym eig = jacobi_eigen(m);
  if (eig.values[0] <= 0.0)
    throw NotPositiveDefinite("symmetrization needs a positive definite form");
  const Vec mu = m.mul(u.vec());
  const double muu = dot(u.vec(), mu);
  Mat out = m;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.at(i, j) += -mu[i] * mu[j] / muu + muu * u[i] * u[j];
  out.symmetrize();
  return out;
}

GapInfo eigen_gap(const Mat& m) {
  const EigenSym eig = jacobi_eigen(m);
  GapInfo g;
  const int d = m.dim();
  g.lmin = eig.values[0];
  g.lmax = eig.values[d - 1];
  g.gap = g.lmax - g.lmin;
  g.vmin = eig.vectors[0];
  g.vmax = eig.vectors[d - 1];
  return g;
}

double eval_gap_bound(const Mat& m, const Direction& u) {
  const GapInfo g = eigen_gap(m);
  const double C = 1.0 + g.lmax / g.lmin;
  const auto psi = [](double t) { return t * t * (1.0 - t * t); };
  const double tmax = dot(u.vec(), g.vmax);
  const double tmin = dot(u.vec(), g.vmin);
  return (1.0 - C * psi(tmax) - 2.0 * psi(tmin)) * g.gap;
}

std::vector<Direction> ellipsoid_to_ball(const Mat& m) {
  const int d = m.dim();
  if (std::fabs(det(m) - 1.0) > 1e-8)
    throw NotUnitDeterminant("form must have determinant 1");

  Mat cur = m;
  std::vector<Direction> dirs;
  std::vector<Vec> fixed;  // directions already symmetrized, eigenvalue 1
  for (int step = 0; step < d - 1; ++step) {
    // Orthonormal basis of the complement of the fixed directions, by
    // Gram-Schmidt over the standard basis.
    std::vector<Vec> basis;
    for (int k = 0; k < d && static_cast<int>(basis.size()) < d - step; ++k) {
      Vec v = basis_vec(d, k);
      for (const Vec& f : fixed) v -= dot(v, f) * f;
      for (const Vec& b : basis) v -= dot(v, b) * b;
      const double nn = v.norm();
      if (nn > 1e-10) basis.push_back((1.0 / nn) * v);
    }
    const int sub = static_cast<int>(basis.size());

    // Restriction of the form to that complement.
    Mat a(sub);
    for (int i = 0; i < sub; ++i)
      for (int j = 0; j < sub; ++j)
        a.at(i, j) = dot(basis[i], cur.mul(basis[j]));
    a.symmetrize();
    const EigenSym eig = jacobi_eigen(a);
    const double lmin = eig.values[0];
    const double lmax = eig.values[sub - 1];
    const Vec& wmin = eig.vectors[0];
    const Vec& wmax = eig.vectors[sub - 1];

    // The restricted determinant is 1, so lmin <= 1 <= lmax and the value 1
    // is crossed on the arc between the extremal eigenvectors:
    // q(theta) = cos^2 lmin + sin^2 lmax is monotone. Bisect it.
    double lo = 0.0, hi = 0.5 * M_PI;
    if (lmax - lmin <= 1e-13) {
      hi = 0.0;  // already a ball on this subspace; any direction works
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double c = std::cos(mid), s = std::sin(mid);
        const double q = c * c * lmin + s * s * lmax;
        (q < 1.0 ? lo : hi) = mid;
      }
    }
    const double theta = 0.5 * (lo + hi);
    Vec w = std::cos(theta) * wmin + std::sin(theta) * wmax;
    Vec full(d);
    for (int i = 0; i < sub; ++i) full += w[i] * basis[i];
    const Direction ui(full);

    cur = steiner_ellipsoid(cur, ui);
    dirs.push_back(ui);
    fixed.push_back(ui.vec());
  }
  return dirs;
}

}  // namespace lab
