#pragma once

#include <vector>

#include "lab/grid.hpp"
#include "lab/smallmat.hpp"
#include "lab/vec.hpp"

namespace lab {

// Steiner symmetrization along u. For axis directions each lattice line is
// rearranged exactly: sorted descending, placed at positions ordered by
// distance to the line center with ties toward the lower index. For general
// u the grid is rotated so u becomes axis 0, resampled (multilinear),
// symmetrized along that axis and rotated back; the two resamplings cost
// O(h * Lipschitz constant) in sup norm.
GridFunction steiner_grid(const GridFunction& f, const Direction& u);

GridSet steiner_set(const GridSet& a, const Direction& u);

// Exact update of the ellipsoid form under Steiner symmetrization along u:
// M' = M - (Mu)(Mu)^T/<u,Mu> + <u,Mu> uu^T. u becomes an eigenvector of M'
// with eigenvalue <u,Mu>; the determinant is preserved; the largest
// eigenvalue cannot grow and the smallest cannot shrink.
Mat steiner_ellipsoid(const Mat& m, const Direction& u);

struct GapInfo {
  double lmax = 0.0;
  double lmin = 0.0;
  double gap = 0.0;
  Vec vmax;
  Vec vmin;
};

GapInfo eigen_gap(const Mat& m);

// Certified lower bound on the eigenvalue gap after symmetrizing along u:
// (1 - C psi(<u,vmax>) - 2 psi(<u,vmin>)) * gap, with psi(t) = t^2(1-t^2)
// and C = 1 + lmax/lmin. Can be vacuous (negative); never exceeds the true
// post-step gap.
double eval_gap_bound(const Mat& m, const Direction& u);

// For det M = 1: d-1 pairwise orthogonal directions, each with unit quadratic
// form value on the current matrix, whose successive Steiner updates turn M
// into the identity. Throws NotUnitDeterminant.
std::vector<Direction> ellipsoid_to_ball(const Mat& m);

}  // namespace lab
