#include "lab/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "lab/errors.hpp"
#include "lab/geometry.hpp"
#include "lab/rng.hpp"

namespace lab {

namespace {

constexpr double kDedupTol = 1e-9;

// Hash of the integer cell floor(x_i / kDedupTol). Points within kDedupTol
// land in the same or an adjacent cell along every axis, so duplicate lookup
// scans the 3^d surrounding cells. Hash collisions across distant cells are
// harmless: candidates are distance-checked before merging.
std::uint64_t cell_hash(const Vec& x, const int* offset) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (int i = 0; i < x.dim(); ++i) {
    auto q = static_cast<std::int64_t>(std::floor(x[i] / kDedupTol));
    h ^= static_cast<std::uint64_t>(q + offset[i]) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

std::vector<Direction> make_direction_set(std::vector<Direction> g) {
  if (g.empty()) throw ConfigError("direction set: empty");
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if ((g[i].vec() - g[j].vec()).norm() <= 1e-10)
        throw ConfigError("direction set: duplicate directions");
  return g;
}

std::vector<Vec> orbit_expand(const std::vector<Direction>& g, const Direction& x,
                              std::size_t budget) {
  std::vector<Vec> pts;
  if (budget == 0) return pts;
  pts.reserve(std::min<std::size_t>(budget, 1 << 20));

  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  int zero[kMaxDim] = {};
  const int d = x.dim();

  auto known = [&](const Vec& y) {
    int off[kMaxDim] = {};
    for (int i = 0; i < d; ++i) off[i] = -1;
    for (;;) {
      auto it = buckets.find(cell_hash(y, off));
      if (it != buckets.end())
        for (int idx : it->second)
          if ((y - pts[idx]).norm() <= kDedupTol) return true;
      int a = 0;
      while (a < d && off[a] == 1) off[a++] = -1;
      if (a == d) return false;
      ++off[a];
    }
  };
  auto insert = [&](const Vec& y) {
    buckets[cell_hash(y, zero)].push_back(static_cast<int>(pts.size()));
    pts.push_back(y);
  };

  insert(x.vec());
  for (std::size_t head = 0; head < pts.size(); ++head) {
    for (const Direction& u : g) {
      if (pts.size() >= budget) return pts;
      Vec y = fold(PolarParam{0.0, u}, pts[head]);
      if (!known(y)) insert(y);
    }
  }
  return pts;
}

std::vector<Direction> probe_directions(int d, std::size_t probes) {
  std::vector<Direction> out;
  out.reserve(probes);
  if (d == 2) {
    for (std::size_t k = 0; k < probes; ++k) {
      double a = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                 static_cast<double>(probes);
      out.push_back(Direction(Vec{std::cos(a), std::sin(a)}));
    }
    return out;
  }
  // Fixed seed keyed by dimension so probe sets are reproducible.
  Rng rng(0x70726f6265ULL, static_cast<std::uint64_t>(d));
  for (std::size_t k = 0; k < probes; ++k) out.push_back(rng.sphere_uniform(d));
  return out;
}

double covering_radius(const std::vector<Vec>& sample, std::size_t probes) {
  if (sample.empty()) throw EmptySet("covering_radius: empty sample");
  if (probes == 0) return 0.0;
  const int d = sample.front().dim();

  if (d == 2) {
    std::vector<double> ang;
    ang.reserve(sample.size());
    for (const Vec& p : sample) ang.push_back(std::atan2(p[1], p[0]));
    std::sort(ang.begin(), ang.end());
    const double two_pi = 2.0 * std::numbers::pi;
    auto circ = [&](double a, double b) {
      double t = std::fabs(a - b);
      return std::min(t, two_pi - t);
    };
    double worst = 0.0;
    for (std::size_t k = 0; k < probes; ++k) {
      double a = -std::numbers::pi +
                 two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(probes);
      auto it = std::lower_bound(ang.begin(), ang.end(), a);
      std::size_t hi = (it == ang.end()) ? 0 : static_cast<std::size_t>(it - ang.begin());
      std::size_t lo = (hi == 0) ? ang.size() - 1 : hi - 1;
      worst = std::max(worst, std::min(circ(a, ang[lo]), circ(a, ang[hi])));
    }
    return worst;
  }

  std::vector<Direction> probe = probe_directions(d, probes);
  double worst = 0.0;
  for (const Direction& p : probe) {
    double best = std::numbers::pi;
    for (const Vec& s : sample) {
      double c = (p.vec() - s).norm();
      double a = 2.0 * std::asin(std::min(1.0, 0.5 * c));
      best = std::min(best, a);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

GeneratingReport generating_heuristics(const std::vector<Direction>& g,
                                       long long max_denominator) {
  GeneratingReport rep;
  if (g.empty()) return rep;
  const int d = g.front().dim();
  const int m = static_cast<int>(g.size());

  // (i) rank of the span, by Gram-Schmidt with a 1e-9 residual cutoff.
  std::vector<Vec> basis;
  for (const Direction& u : g) {
    Vec r = u.vec();
    for (const Vec& b : basis) r -= dot(r, b) * b;
    double n = r.norm();
    if (n > 1e-9) basis.push_back((1.0 / n) * r);
  }
  rep.spans = static_cast<int>(basis.size()) == d;

  // (ii) union-find over the non-orthogonality graph; a split into two
  // components is exactly an orthogonal bipartition.
  std::vector<int> parent(g.size());
  for (int i = 0; i < m; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::fabs(dot(g[i].vec(), g[j].vec())) > 1e-12)
        parent[find(i)] = find(j);
  rep.no_orthogonal_split = true;
  for (int i = 0; i < m; ++i)
    if (find(i) != find(0)) rep.no_orthogonal_split = false;

  // (iii) for each pairwise angle theta, the exact distance to the nearest
  // p*pi/q over all q <= max_denominator, by direct scan.
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double theta = angular_distance(g[i], g[j]);
      double x = theta / std::numbers::pi;
      double best = 1.0;
      for (long long q = 1; q <= max_denominator; ++q) {
        double qq = static_cast<double>(q);
        double e = std::fabs(x * qq - std::round(x * qq)) / qq;
        best = std::min(best, e);
      }
      rep.best_margin = std::max(rep.best_margin, std::numbers::pi * best);
    }
  rep.irrational_angle = rep.best_margin > 1e-8;
  return rep;
}

}  // namespace lab
