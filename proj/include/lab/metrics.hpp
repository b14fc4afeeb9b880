#pragma once

#include <vector>

#include "lab/grid.hpp"
#include "lab/vec.hpp"

namespace lab {

// The Lyapunov functional of the polarization dynamics: h^d sum f(x)|x|.
// Strictly decreases under any polarization that moves mass, and is minimal
// exactly at the symmetric decreasing rearrangement.
double radial_moment(const GridFunction& f);

double symm_diff_volume(const GridSet& a, const GridSet& b);

// Drop of the symmetric difference to the rearranged set under one
// lattice-aligned polarization: 2 h^d |{x in A*\A : sigma x in A\A*}|.
// Equals symm_diff_volume(A,A*) - symm_diff_volume(SA,A*) exactly when A* is
// the rearrangement of A.
double delta_drop(const GridSet& a, const GridSet& astar, const PolarParam& w);

// Squared Euclidean distance (length^2) from each cell center to the nearest
// member cell center, by the exact two-pass parabola transform.
std::vector<double> squared_distance_transform(const GridSet& a);

double hausdorff(const GridSet& a, const GridSet& b);

// Member cells with an axis neighbor outside the set (or outside the box).
GridSet boundary_cells(const GridSet& a);

// Radius of the ball with the same volume as the outer (t > 0) or inner
// (t < 0) parallel set of K; t = 0 gives K itself. Distances to the
// complement account for the region beyond the box.
double parallel_radius(const GridSet& k, double t);

// [offset + dist(x, complement of K) - dist(x, K)]^+ on the lattice; level
// sets below `offset` are outer parallel sets of K, above are inner ones.
GridFunction aux_distance_function(const GridSet& k, double offset);

}  // namespace lab
