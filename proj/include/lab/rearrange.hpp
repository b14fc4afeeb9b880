#pragma once

#include <cstdint>
#include <vector>

#include "lab/grid.hpp"

namespace lab {

// Cells sorted by (integer radial key, flat index). Flat order is row-major,
// so the tie rule is lexicographic on the index tuple.
std::vector<std::uint32_t> radial_order(const Lattice& lat);

// Symmetric decreasing rearrangement on the lattice: the same multiset of
// cell values, reassigned nonincreasingly along radial_order. Equimeasurable
// bit-exact and idempotent.
GridFunction sdr_grid(const GridFunction& f);

// Set version: the |A| cells nearest the origin in radial_order.
GridSet sdr_set(const GridSet& a);

double sup_distance(const GridFunction& f, const GridFunction& g);
double l1_distance(const GridFunction& f, const GridFunction& g);

// max |f(x)-f(y)| over cell pairs with |x-y| <= rho, by exact offset scan.
double modulus_of_continuity(const GridFunction& f, double rho);

GridSet level_set(const GridFunction& f, double t);  // cells with f > t

}  // namespace lab
