#pragma once

#include "lab/grid.hpp"
#include "lab/smallmat.hpp"
#include "lab/vec.hpp"

namespace lab {

// f(x) = [1 - <x, Mx>]^+ for symmetric positive definite M. Closed under
// Steiner symmetrization (see steiner.hpp); its rearrangement is the ball
// form with the geometric-mean eigenvalue.
struct EllipsoidFunction {
  Mat M;
};

// Validates symmetry (1e-10) and positive definiteness.
EllipsoidFunction make_ellipsoid(const Mat& m);

double ellipsoid_value(const EllipsoidFunction& e, const Point& x);

// M <- (det M)^(1/d) * I.
EllipsoidFunction sdr_ellipsoid(const EllipsoidFunction& e);

// Exact sup distance between [1-<x,Mx>]^+ and the ball form [1-lam|x|^2]^+:
// max over extremal eigenvalues of 1 - min(lam_i,lam)/max(lam_i,lam).
double ellipsoid_ball_sup_distance(const EllipsoidFunction& e, double lam);

// Distance to its own rearrangement (lam = (det M)^(1/d)).
double ellipsoid_sup_to_sdr(const EllipsoidFunction& e);

GridFunction ellipsoid_to_grid(const Lattice& lat, const EllipsoidFunction& e);

}  // namespace lab
