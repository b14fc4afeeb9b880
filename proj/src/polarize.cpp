#include "lab/polarize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lab/errors.hpp"
#include "lab/rearrange.hpp"

namespace lab {

AxisMirror resolve_axis_mirror(const Lattice& lat, const PolarParam& w) {
  const int d = lat.d;
  int axis = -1;
  int sign = 0;
  for (int k = 0; k < d; ++k) {
    const double c = w.u[k];
    if (std::fabs(std::fabs(c) - 1.0) <= 1e-12) {
      axis = k;
      sign = c > 0.0 ? 1 : -1;
    } else if (std::fabs(c) > 1e-12) {
      throw NotLatticeCompatible("direction is not an axis");
    }
  }
  if (axis < 0) throw NotLatticeCompatible("direction is not an axis");
  const double h = lat.h();
  const double mf = w.r / h;
  const double mround = std::round(mf);
  if (std::fabs(mf - mround) > 1e-9 || mround < 1.0)
    throw NotLatticeCompatible("r is not a positive multiple of h");
  return AxisMirror{axis, sign, static_cast<int>(mround)};
}

namespace {

// Per-index line tables for a lattice-aligned mirror: partner index (or -1
// when the mirror falls outside the box) and the side of the hyperplane,
// decided on exact integers q = 2i+1-n versus q' = 2*sign*m - q.
struct LineTables {
  std::vector<int> partner;
  std::vector<Side> side;
};

LineTables line_tables(const Lattice& lat, const AxisMirror& am) {
  LineTables t;
  t.partner.resize(lat.n);
  t.side.resize(lat.n);
  for (int i = 0; i < lat.n; ++i) {
    const std::int64_t q = lat.q_of(i);
    const std::int64_t qp = 2 * static_cast<std::int64_t>(am.sign) * am.m - q;
    const int j = mirror_index(lat, am, i);
    t.partner[i] = (j >= 0 && j < lat.n) ? j : -1;
    if (q * q < qp * qp)
      t.side[i] = Side::Positive;
    else if (q * q > qp * qp)
      t.side[i] = Side::Negative;
    else
      t.side[i] = Side::Boundary;
  }
  return t;
}

template <typename T, typename Combine>
void apply_axis_mirror(const Lattice& lat, const AxisMirror& am,
                       const std::vector<T>& src, std::vector<T>& dst,
                       Combine combine) {
  const LineTables t = line_tables(lat, am);
  const int n = lat.n;
  std::size_t stride = 1;
  for (int k = lat.d - 1; k > am.axis; --k) stride *= static_cast<std::size_t>(n);
  const std::size_t blocks = lat.cell_count() / static_cast<std::size_t>(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t outer = b / stride;
    const std::size_t inner = b % stride;
    const std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
    for (int i = 0; i < n; ++i) {
      const std::size_t at = base + static_cast<std::size_t>(i) * stride;
      const int j = t.partner[i];
      const T mirror = j >= 0 ? src[base + static_cast<std::size_t>(j) * stride]
                              : static_cast<T>(0);
      dst[at] = combine(src[at], mirror, t.side[i]);
    }
  }
}

template <typename T>
inline double bilinear(const T* grid, int n, double tx, double ty) {
  const double fx = std::floor(tx);
  const double fy = std::floor(ty);
  const int bx = static_cast<int>(fx);
  const int by = static_cast<int>(fy);
  if (bx < -1 || bx > n - 1 || by < -1 || by > n - 1) return 0.0;
  const double ax = tx - fx;
  const double ay = ty - fy;
  if (bx >= 0 && bx + 1 < n && by >= 0 && by + 1 < n) {
    const T* row = grid + static_cast<std::size_t>(bx) * n + by;
    const double v00 = row[0], v01 = row[1];
    const double v10 = row[n], v11 = row[n + 1];
    return (1.0 - ax) * ((1.0 - ay) * v00 + ay * v01) +
           ax * ((1.0 - ay) * v10 + ay * v11);
  }
  double acc = 0.0;
  if (bx >= 0) {
    const T* row = grid + static_cast<std::size_t>(bx) * n;
    if (by >= 0) acc += (1.0 - ax) * (1.0 - ay) * row[by];
    if (by + 1 < n) acc += (1.0 - ax) * ay * row[by + 1];
  }
  if (bx + 1 < n) {
    const T* row = grid + static_cast<std::size_t>(bx + 1) * n;
    if (by >= 0) acc += ax * (1.0 - ay) * row[by];
    if (by + 1 < n) acc += ax * ay * row[by + 1];
  }
  return acc;
}

// Hot loop shared by the d=2 interpolating paths. Emit(dst_index, own value,
// side sign (+1/0/-1), mirror value) writes the combined result.
template <typename T, typename Emit>
void interp_scan_d2(const Lattice& lat, const PolarParam& w,
                    const std::vector<T>& src, Emit emit) {
  const int n = lat.n;
  const double h = lat.h();
  const double L = lat.L;
  const double invh = 1.0 / h;
  const double r = w.r;
  const double u0 = w.u[0];
  const double u1 = w.u[1];
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lat.coord_of(i);
  const T* grid = src.data();
  for (int i0 = 0; i0 < n; ++i0) {
    const double x0 = xs[i0];
    const double trow = r - 2.0 * u0 * x0;
    const std::size_t row = static_cast<std::size_t>(i0) * n;
    for (int i1 = 0; i1 < n; ++i1) {
      const double x1 = xs[i1];
      const double t = trow - 2.0 * u1 * x1;
      const double D = r * t;  // = |sigma x|^2 - |x|^2
      const std::size_t at = row + static_cast<std::size_t>(i1);
      if (std::fabs(D) <= kSideTol) {
        emit(at, src[at], 0, 0.0);
        continue;
      }
      const double tx = (x0 + t * u0 + L) * invh - 0.5;
      const double ty = (x1 + t * u1 + L) * invh - 0.5;
      emit(at, src[at], D > 0.0 ? 1 : -1, bilinear(grid, n, tx, ty));
    }
  }
}

GridFunction polarize_grid_interp(const GridFunction& f, const PolarParam& w) {
  GridFunction out(f.lat);
  if (f.lat.d == 2) {
    interp_scan_d2<double>(
        f.lat, w, f.v, [&out](std::size_t at, double v, int side, double m) {
          out.v[at] = side > 0 ? std::max(v, m) : side < 0 ? std::min(v, m) : v;
        });
    return out;
  }
  const Lattice& lat = f.lat;
  const std::size_t total = lat.cell_count();
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    const Point x = lat.center(idx);
    const double t = w.r - 2.0 * dot(x, w.u.vec());
    const double D = w.r * t;
    if (std::fabs(D) <= kSideTol) {
      out.v[i] = f.v[i];
    } else {
      Point sx = x;
      for (int k = 0; k < lat.d; ++k) sx[k] += t * w.u[k];
      const double m = f.value_at(sx);
      out.v[i] = D > 0.0 ? std::max(f.v[i], m) : std::min(f.v[i], m);
    }
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace

GridFunction polarize_grid(const GridFunction& f, const PolarParam& w,
                           PolarizeMode mode) {
  if (mode == PolarizeMode::MirrorExact) {
    const AxisMirror am = resolve_axis_mirror(f.lat, w);
    GridFunction out(f.lat);
    apply_axis_mirror<double>(f.lat, am, f.v, out.v,
                              [](double a, double b, Side s) {
                                if (s == Side::Positive) return std::max(a, b);
                                if (s == Side::Negative) return std::min(a, b);
                                return a;
                              });
    return out;
  }
  return polarize_grid_interp(f, w);
}

GridSet polarize_set(const GridSet& a, const PolarParam& w, PolarizeMode mode) {
  if (mode == PolarizeMode::MirrorExact) {
    const AxisMirror am = resolve_axis_mirror(a.lat, w);
    GridSet out(a.lat);
    apply_axis_mirror<std::uint8_t>(
        a.lat, am, a.m, out.m, [](std::uint8_t x, std::uint8_t y, Side s) {
          if (s == Side::Positive) return static_cast<std::uint8_t>(x | y);
          if (s == Side::Negative) return static_cast<std::uint8_t>(x & y);
          return x;
        });
    return out;
  }
  if (a.lat.d == 2) {
    // Membership after an interpolated reflection: the mirrored mass counts
    // as present when the interpolated indicator exceeds 1/2.
    GridSet out(a.lat);
    interp_scan_d2<std::uint8_t>(
        a.lat, w, a.m, [&out](std::size_t at, std::uint8_t v, int side, double m) {
          const bool mir = m > 0.5;
          out.m[at] = side > 0 ? (v || mir) : side < 0 ? (v && mir) : v;
        });
    return out;
  }
  return threshold_set(polarize_grid(indicator(a), w, PolarizeMode::Interp), 0.5);
}

double radial_moment_drop(const GridFunction& f, const PolarParam& w) {
  const Lattice& lat = f.lat;
  const AxisMirror am = resolve_axis_mirror(lat, w);
  const std::vector<double> norms = cell_norms(lat);
  const LineTables t = line_tables(lat, am);
  const int n = lat.n;
  std::size_t stride = 1;
  for (int k = lat.d - 1; k > am.axis; --k) stride *= static_cast<std::size_t>(n);
  const std::size_t blocks = lat.cell_count() / static_cast<std::size_t>(n);
  double acc = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t outer = b / stride;
    const std::size_t inner = b % stride;
    const std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
    for (int i = 0; i < n; ++i) {
      const int j = t.partner[i];
      if (j < 0) continue;  // mirror outside the box reads 0, term vanishes
      const std::size_t at = base + static_cast<std::size_t>(i) * stride;
      const std::size_t pat = base + static_cast<std::size_t>(j) * stride;
      const double dval = f.v[pat] - f.v[at];
      const double dn = norms[pat] - norms[at];
      if (dval > 0.0 && dn > 0.0) acc += dval * dn;
    }
  }
  return acc * std::pow(lat.h(), lat.d);
}

double drop_lower_bound_uniform(const GridFunction& f, double L) {
  const Lattice& lat = f.lat;
  const double eps = sup_distance(f, sdr_grid(f));
  if (!(eps > 0.0))
    throw AlreadySymmetric("function equals its rearrangement");
  const double h = lat.h();
  if (modulus_of_continuity(f, h) > eps / 8.0)
    throw NoValidRho("modulus exceeds eps/8 already at rho = h");
  int k = 1;
  while (k < lat.n && modulus_of_continuity(f, (k + 1) * h) <= eps / 8.0) ++k;
  const double rho = k * h;
  const double ceps = eps * rho * ball_volume(lat.d, rho) / 2.0;
  return ceps * ball_volume(lat.d, rho) /
         (sphere_area(lat.d) * std::pow(2.0 * L, lat.d));
}

}  // namespace lab
