#include "lab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lab {

std::vector<std::uint32_t> radial_order(const Lattice& lat) {
  const std::size_t total = lat.cell_count();
  std::vector<std::int64_t> key(total);
  int idx[kMaxDim] = {0};
  for (std::size_t f = 0; f < total; ++f) {
    key[f] = lat.radial_key(idx);
    // odometer increment, axis d-1 fastest (matches flat order)
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  std::vector<std::uint32_t> order(total);
  for (std::size_t f = 0; f < total; ++f) order[f] = static_cast<std::uint32_t>(f);
  std::sort(order.begin(), order.end(), [&key](std::uint32_t a, std::uint32_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    return a < b;
  });
  return order;
}

GridFunction sdr_grid(const GridFunction& f) {
  const std::vector<std::uint32_t> order = radial_order(f.lat);
  std::vector<double> vals = f.v;
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  GridFunction out(f.lat);
  for (std::size_t j = 0; j < order.size(); ++j) out.v[order[j]] = vals[j];
  return out;
}

GridSet sdr_set(const GridSet& a) {
  const std::vector<std::uint32_t> order = radial_order(a.lat);
  const std::size_t k = a.count();
  GridSet out(a.lat);
  for (std::size_t j = 0; j < k; ++j) out.m[order[j]] = 1;
  return out;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
  check_same_lattice(f.lat, g.lat);
  double m = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i)
    m = std::max(m, std::fabs(f.v[i] - g.v[i]));
  return m;
}

double l1_distance(const GridFunction& f, const GridFunction& g) {
  check_same_lattice(f.lat, g.lat);
  double s = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) s += std::fabs(f.v[i] - g.v[i]);
  return s * std::pow(f.lat.h(), f.lat.d);
}

double modulus_of_continuity(const GridFunction& f, double rho) {
  if (rho < 0.0) return 0.0;
  const Lattice& lat = f.lat;
  const int d = lat.d;
  const int n = lat.n;
  const double h = lat.h();
  // |x-y| = h|delta| for integer offsets delta, so the cutoff in integer
  // units is |delta|^2 <= (rho/h)^2; small slack absorbs the division.
  const double rr = rho / h;
  const std::int64_t r2max =
      static_cast<std::int64_t>(std::floor(rr * rr + 1e-9));
  if (r2max <= 0) return 0.0;
  const int kmax = std::min(n - 1, static_cast<int>(std::floor(rr + 1e-9)));

  double best = 0.0;
  // Enumerate canonical offsets (first nonzero component positive); for each,
  // slide over all in-bounds cell pairs.
  int delta[kMaxDim];
  std::function<void(int, std::int64_t, bool)> rec = [&](int k, std::int64_t s2,
                                                         bool started) {
    if (k == d) {
      if (!started || s2 > r2max) return;
      int lo[kMaxDim], hi[kMaxDim];
      for (int a = 0; a < d; ++a) {
        lo[a] = std::max(0, -delta[a]);
        hi[a] = std::min(n, n - delta[a]);  // exclusive
        if (lo[a] >= hi[a]) return;
      }
      // flat(x+delta) - flat(x) is the same for every in-bounds x
      std::ptrdiff_t jump = 0;
      for (int a = 0; a < d; ++a) jump = jump * n + delta[a];
      int idx[kMaxDim];
      for (int a = 0; a < d; ++a) idx[a] = lo[a];
      for (;;) {
        const std::size_t base = lat.to_flat(idx);
        const double diff =
            std::fabs(f.v[base] - f.v[static_cast<std::size_t>(
                                    static_cast<std::ptrdiff_t>(base) + jump)]);
        if (diff > best) best = diff;
        int a = d - 1;
        for (; a >= 0; --a) {
          if (++idx[a] < hi[a]) break;
          idx[a] = lo[a];
        }
        if (a < 0) break;
      }
      return;
    }
    const int from = started ? -kmax : 0;
    for (int t = from; t <= kmax; ++t) {
      const std::int64_t s2t = s2 + static_cast<std::int64_t>(t) * t;
      if (s2t > r2max) continue;
      delta[k] = t;
      rec(k + 1, s2t, started || t > 0);
    }
  };
  rec(0, 0, false);
  return best;
}

GridSet level_set(const GridFunction& f, double t) { return threshold_set(f, t); }

}  // namespace lab
