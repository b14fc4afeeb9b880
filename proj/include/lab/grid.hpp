#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lab/errors.hpp"
#include "lab/vec.hpp"

namespace lab {

// Regular lattice of cell centers covering [-L,L]^d: n cells per axis,
// spacing h = 2L/n, centers at -L + (i+1/2)h for i in [0,n).
//
// In integer units q = 2i+1-n the center coordinate is (h/2)q with q odd
// (n even) or even (n odd), |q| <= n-1. All orderings that the rearrangement
// and symmetrization kernels depend on (radial order, distance to the axis
// midpoint, mirror partners) are computed on q, never on floating-point
// centers, so ties resolve identically on every platform.
struct Lattice {
  int d = 1;
  int n = 1;
  double L = 1.0;

  double h() const { return 2.0 * L / n; }

  std::size_t cell_count() const {
    std::size_t c = 1;
    for (int k = 0; k < d; ++k) c *= static_cast<std::size_t>(n);
    return c;
  }

  // Row-major, axis 0 outermost.
  std::size_t to_flat(const int* idx) const {
    std::size_t f = 0;
    for (int k = 0; k < d; ++k) f = f * static_cast<std::size_t>(n) + idx[k];
    return f;
  }

  void from_flat(std::size_t flat, int* idx) const {
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(flat % static_cast<std::size_t>(n));
      flat /= static_cast<std::size_t>(n);
    }
  }

  std::int64_t q_of(int i) const { return 2 * static_cast<std::int64_t>(i) + 1 - n; }

  double coord_of(int i) const { return 0.5 * h() * static_cast<double>(q_of(i)); }

  Point center(const int* idx) const {
    Point x(d);
    for (int k = 0; k < d; ++k) x[k] = coord_of(idx[k]);
    return x;
  }

  Point center_flat(std::size_t flat) const {
    int idx[kMaxDim] = {0};
    from_flat(flat, idx);
    return center(idx);
  }

  // Exact integer key proportional to |center|^2; q < 2n so the sum stays
  // far below the int64 range for any feasible grid.
  std::int64_t radial_key(const int* idx) const {
    std::int64_t s = 0;
    for (int k = 0; k < d; ++k) {
      const std::int64_t q = q_of(idx[k]);
      s += q * q;
    }
    return s;
  }

  bool same(const Lattice& o) const { return d == o.d && n == o.n && L == o.L; }
};

struct GridFunction {
  Lattice lat;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(const Lattice& l) : lat(l), v(l.cell_count(), 0.0) {}

  // Multilinear interpolation between cell centers; reads 0 outside the box
  // (compact support).
  double value_at(const Point& x) const;

  double max_value() const;
};

struct GridSet {
  Lattice lat;
  std::vector<std::uint8_t> m;

  GridSet() = default;
  explicit GridSet(const Lattice& l) : lat(l), m(l.cell_count(), 0) {}

  std::size_t count() const;
};

inline void check_same_lattice(const Lattice& a, const Lattice& b) {
  if (!a.same(b)) throw LatticeMismatch("grids live on different lattices");
}

GridFunction indicator(const GridSet& a);
GridSet threshold_set(const GridFunction& f, double t);  // cells with f > t

// |center| per flat index. Every module that weighs cells by distance to the
// origin goes through this one table, so identities relating those sums hold
// to rounding, not to discretization.
std::vector<double> cell_norms(const Lattice& lat);

// Flat binary format: d and L as 8-byte floats, cells-per-axis as 8-byte
// unsigned, then the values row-major as 8-byte floats (sets as 0/1).
void save_grid(const GridFunction& f, const std::string& path);
GridFunction load_grid(const std::string& path);
void save_set(const GridSet& a, const std::string& path);
GridSet load_set(const std::string& path);

}  // namespace lab
