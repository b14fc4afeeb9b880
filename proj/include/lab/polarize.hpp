#pragma once

#include "lab/geometry.hpp"
#include "lab/grid.hpp"
#include "lab/vec.hpp"

namespace lab {

// MirrorExact restricts to reflections that map the lattice to itself
// (u = +-e_k, r a positive multiple of h); every invariant is then bit-exact
// because cells swap values in mirror pairs. Interp admits arbitrary
// parameters and reads the mirror value by multilinear interpolation, at an
// O(h) equimeasurability cost.
enum class PolarizeMode { Interp, MirrorExact };

// A lattice-aligned mirror: u = sign * e_axis, r = m * h.
struct AxisMirror {
  int axis = 0;
  int sign = 1;
  int m = 1;
};

// Throws NotLatticeCompatible unless u is an axis direction within 1e-12 and
// r is a positive integer multiple of h within 1e-9 * h.
AxisMirror resolve_axis_mirror(const Lattice& lat, const PolarParam& w);

// Mirror cell index along the axis: i -> sign*m + n-1-i. May fall outside
// [0, n); such mirrors read value 0 (they lie beyond the box, which can only
// happen on the kept side).
inline int mirror_index(const Lattice& lat, const AxisMirror& am, int i) {
  return am.sign * am.m + lat.n - 1 - i;
}

GridFunction polarize_grid(const GridFunction& f, const PolarParam& w,
                           PolarizeMode mode);
GridSet polarize_set(const GridSet& a, const PolarParam& w, PolarizeMode mode);

// The per-reflection drop of the radial moment integral(f(x)|x|dx), as the
// explicit sum h^d sum_x [f(sigma x)-f(x)]^+ [|sigma x|-|x|]^+. Equals the
// actual drop of the radial moment under polarize_grid for lattice-aligned
// mirrors, where both sides are exact.
double radial_moment_drop(const GridFunction& f, const PolarParam& w);

// Certified lower bound on the expected radial-moment drop for a reflection
// drawn uniformly from (0,2L) x sphere, for f supported in the ball B_L:
// with eps = sup distance to the rearrangement and rho the largest lattice
// radius whose modulus of continuity stays below eps/8, the bound is
// (eps*rho*vol(B_rho)/2) * vol(B_rho) / (area(sphere) * (2L)^d).
// Throws AlreadySymmetric when eps = 0, NoValidRho when even rho = h fails.
double drop_lower_bound_uniform(const GridFunction& f, double L);

}  // namespace lab
