#include "lab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lab/errors.hpp"
#include "lab/geometry.hpp"
#include "lab/polarize.hpp"

namespace lab {

double radial_moment(const GridFunction& f) {
  const std::vector<double> norms = cell_norms(f.lat);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) acc += f.v[i] * norms[i];
  return acc * std::pow(f.lat.h(), f.lat.d);
}

double symm_diff_volume(const GridSet& a, const GridSet& b) {
  check_same_lattice(a.lat, b.lat);
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.m.size(); ++i) count += a.m[i] != b.m[i];
  return static_cast<double>(count) * std::pow(a.lat.h(), a.lat.d);
}

double delta_drop(const GridSet& a, const GridSet& astar, const PolarParam& w) {
  check_same_lattice(a.lat, astar.lat);
  const Lattice& lat = a.lat;
  const AxisMirror am = resolve_axis_mirror(lat, w);
  const int n = lat.n;
  std::size_t stride = 1;
  for (int k = lat.d - 1; k > am.axis; --k) stride *= static_cast<std::size_t>(n);
  const std::size_t blocks = lat.cell_count() / static_cast<std::size_t>(n);
  std::size_t count = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t outer = b / stride;
    const std::size_t inner = b % stride;
    const std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
    for (int i = 0; i < n; ++i) {
      const std::size_t at = base + static_cast<std::size_t>(i) * stride;
      if (!(astar.m[at] && !a.m[at])) continue;
      const int j = mirror_index(lat, am, i);
      if (j < 0 || j >= n) continue;  // beyond the box, so not in A
      const std::size_t pat = base + static_cast<std::size_t>(j) * stride;
      if (a.m[pat] && !astar.m[pat]) ++count;
    }
  }
  return 2.0 * static_cast<double>(count) * std::pow(lat.h(), lat.d);
}

namespace {

constexpr double kFar = 1e30;

// Lower envelope of parabolas, one pass along a line (squared distances in
// cell units).
void edt_line(const double* f, int n, double* out, int* v, double* z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) -
           (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    out[q] = dq * dq + f[v[k]];
  }
}

// Squared distances in cell units to the nearest seed (cells where seed != 0).
std::vector<double> edt_cells(const Lattice& lat,
                              const std::vector<std::uint8_t>& seed) {
  const int n = lat.n;
  const std::size_t total = lat.cell_count();
  std::vector<double> dist(total);
  for (std::size_t i = 0; i < total; ++i) dist[i] = seed[i] ? 0.0 : kFar;

  std::vector<double> f(n), out(n), z(n + 1);
  std::vector<int> v(n);
  for (int axis = lat.d - 1; axis >= 0; --axis) {
    std::size_t stride = 1;
    for (int k = lat.d - 1; k > axis; --k) stride *= static_cast<std::size_t>(n);
    const std::size_t blocks = total / static_cast<std::size_t>(n);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t outer = b / stride;
      const std::size_t inner = b % stride;
      const std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
      for (int i = 0; i < n; ++i)
        f[i] = dist[base + static_cast<std::size_t>(i) * stride];
      edt_line(f.data(), n, out.data(), v.data(), z.data());
      for (int i = 0; i < n; ++i)
        dist[base + static_cast<std::size_t>(i) * stride] = out[i];
    }
  }
  return dist;
}

// dist(x, complement of K) in length units; cells beyond the box count as
// complement, so members near the wall see the ghost ring at L + h/2.
std::vector<double> complement_distance(const GridSet& k) {
  const Lattice& lat = k.lat;
  std::vector<std::uint8_t> comp(k.m.size());
  for (std::size_t i = 0; i < k.m.size(); ++i) comp[i] = k.m[i] ? 0 : 1;
  bool any = false;
  for (std::uint8_t c : comp) any |= c != 0;
  const double h = lat.h();
  std::vector<double> dist(k.m.size(),
                           std::numeric_limits<double>::infinity());
  if (any) {
    const std::vector<double> d2 = edt_cells(lat, comp);
    for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = h * std::sqrt(d2[i]);
  }
  const std::size_t total = lat.cell_count();
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    double wall = std::numeric_limits<double>::infinity();
    for (int a = 0; a < lat.d; ++a)
      wall = std::min(wall, lat.L + 0.5 * h - std::fabs(lat.coord_of(idx[a])));
    dist[i] = std::min(dist[i], wall);
    for (int a = lat.d - 1; a >= 0; --a) {
      if (++idx[a] < lat.n) break;
      idx[a] = 0;
    }
  }
  return dist;
}

}  // namespace

std::vector<double> squared_distance_transform(const GridSet& a) {
  if (a.count() == 0) throw EmptySet("distance transform of the empty set");
  std::vector<double> d2 = edt_cells(a.lat, a.m);
  const double h2 = a.lat.h() * a.lat.h();
  for (double& x : d2) x *= h2;
  return d2;
}

double hausdorff(const GridSet& a, const GridSet& b) {
  check_same_lattice(a.lat, b.lat);
  if (a.count() == 0 || b.count() == 0)
    throw EmptySet("hausdorff distance needs nonempty sets");
  const std::vector<double> da = edt_cells(a.lat, a.m);
  const std::vector<double> db = edt_cells(b.lat, b.m);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.m.size(); ++i) {
    if (a.m[i]) worst = std::max(worst, db[i]);
    if (b.m[i]) worst = std::max(worst, da[i]);
  }
  return a.lat.h() * std::sqrt(worst);
}

GridSet boundary_cells(const GridSet& a) {
  const Lattice& lat = a.lat;
  GridSet out(lat);
  const std::size_t total = lat.cell_count();
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    if (a.m[i]) {
      bool edge = false;
      for (int k = 0; k < lat.d && !edge; ++k) {
        std::size_t stride = 1;
        for (int kk = lat.d - 1; kk > k; --kk)
          stride *= static_cast<std::size_t>(lat.n);
        if (idx[k] == 0 || !a.m[i - stride]) edge = true;
        if (!edge && (idx[k] == lat.n - 1 || !a.m[i + stride])) edge = true;
      }
      out.m[i] = edge ? 1 : 0;
    }
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  return out;
}

double parallel_radius(const GridSet& k, double t) {
  const Lattice& lat = k.lat;
  if (k.count() == 0) throw EmptyParallelSet("empty base set");
  std::size_t count = 0;
  if (t > 0.0) {
    const std::vector<double> d2 = squared_distance_transform(k);
    const double t2 = t * t;
    for (double x : d2) count += x < t2;
  } else if (t == 0.0) {
    count = k.count();
  } else {
    const std::vector<double> dc = complement_distance(k);
    for (std::size_t i = 0; i < k.m.size(); ++i)
      count += k.m[i] && dc[i] > -t;
  }
  if (count == 0) throw EmptyParallelSet("inner parallel set is empty");
  const double vol =
      static_cast<double>(count) * std::pow(lat.h(), lat.d);
  return std::pow(vol / ball_volume(lat.d, 1.0), 1.0 / lat.d);
}

GridFunction aux_distance_function(const GridSet& k, double offset) {
  const Lattice& lat = k.lat;
  GridFunction f(lat);
  if (k.count() == 0) {
    return f;  // dist to K is infinite; the positive part is 0 everywhere
  }
  const std::vector<double> dk2 = squared_distance_transform(k);
  const std::vector<double> dc = complement_distance(k);
  for (std::size_t i = 0; i < f.v.size(); ++i)
    f.v[i] = std::max(0.0, offset + dc[i] - std::sqrt(dk2[i]));
  return f;
}

}  // namespace lab
