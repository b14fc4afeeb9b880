#pragma once

#include <cstddef>
#include <vector>

#include "lab/vec.hpp"

namespace lab {

// Validates a direction set G: nonempty, pairwise distinct within 1e-10.
// Returns the set unchanged; throws ConfigError otherwise.
std::vector<Direction> make_direction_set(std::vector<Direction> g);

// Breadth-first closure of {x} under the r = 0 folding maps of the given
// directions, in discovery order, so the output for a smaller budget is a
// prefix of the output for a larger one. Points within 1e-9 of an already
// collected point are merged; expansion halts once `budget` points exist.
// Points are not renormalized: foldings are exact isometries, so norm drift
// stays additive in rounding and the returned norms certify it.
std::vector<Vec> orbit_expand(const std::vector<Direction>& g, const Direction& x,
                              std::size_t budget);

// Deterministic quasi-uniform probe set used by covering_radius: angles
// 2*pi*(k+1/2)/probes on the circle for d = 2, a fixed-seed uniform sphere
// sample otherwise.
std::vector<Direction> probe_directions(int d, std::size_t probes);

// Largest angular distance from a probe point to the nearest sample point.
// An empirical density proxy: samples filling the sphere drive it to 0.
// Throws EmptySet when the sample is empty.
double covering_radius(const std::vector<Vec>& sample, std::size_t probes);

struct GeneratingReport {
  bool spans = false;               // directions span the whole space
  bool no_orthogonal_split = false; // non-orthogonality graph is connected
  bool irrational_angle = false;    // heuristic screen, see below
  double best_margin = 0.0;         // largest min_{p,q<=Q} |theta - p*pi/q|
};

// Necessary-condition screens for a direction set to generate dense orbits:
// (i) full span, (ii) no bipartition into mutually orthogonal parts,
// (iii) some pairwise angle theta stays farther than 1e-8 from every
// rational multiple p*pi/q with q <= max_denominator. (iii) is a screen,
// not a decision: a floating-point angle cannot certify irrationality.
// Cost of (iii) is O(|G|^2 * max_denominator).
GeneratingReport generating_heuristics(const std::vector<Direction>& g,
                                       long long max_denominator);

}  // namespace lab
