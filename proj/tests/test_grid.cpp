#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lab/grid.hpp"
#include "lab/rearrange.hpp"
#include "lab/rng.hpp"

using namespace lab;

namespace {

GridFunction random_grid(const Lattice& lat, Rng& rng, double lo = 0.0, double hi = 1.0) {
  GridFunction f(lat);
  for (double& v : f.v) v = rng.uniform(lo, hi);
  return f;
}

GridSet random_set(const Lattice& lat, Rng& rng, double p = 0.4) {
  GridSet a(lat);
  for (auto& b : a.m) b = rng.uniform01() < p ? 1 : 0;
  return a;
}

std::vector<double> sorted_values(const GridFunction& f) {
  std::vector<double> s = f.v;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("lattice indexing round-trips and centers sit on the integer grid") {
  const Lattice lat{3, 6, 1.5};
  CHECK(lat.h() == doctest::Approx(0.5));
  CHECK(lat.cell_count() == 216);
  for (std::size_t flat = 0; flat < lat.cell_count(); flat += 7) {
    int idx[kMaxDim] = {0};
    lat.from_flat(flat, idx);
    CHECK(lat.to_flat(idx) == flat);
    const Point x = lat.center(idx);
    for (int k = 0; k < 3; ++k)
      CHECK(x[k] == doctest::Approx(-lat.L + (idx[k] + 0.5) * lat.h()).epsilon(1e-15));
    CHECK(static_cast<double>(lat.radial_key(idx)) * 0.25 * lat.h() * lat.h() ==
          doctest::Approx(x.norm2()).epsilon(1e-13));
  }
}

TEST_CASE("radial order puts the origin first and respects the flat tiebreak") {
  const Lattice lat{2, 3, 1.0};
  // Keys on a 3x3 grid: center 0, edge midpoints 4, corners 8.
  const auto order = radial_order(lat);
  REQUIRE(order.size() == 9);
  CHECK(order[0] == 4);
  CHECK(order[1] == 1);
  CHECK(order[2] == 3);
  CHECK(order[3] == 5);
  CHECK(order[4] == 7);
  CHECK(order[5] == 0);
  CHECK(order[6] == 2);
  CHECK(order[7] == 6);
  CHECK(order[8] == 8);
}

TEST_CASE("one-dimensional rearrangement matches the hand-built example") {
  const Lattice lat{1, 4, 1.0};
  GridFunction f(lat);
  f.v = {3.0, 1.0, 4.0, 1.0};
  const GridFunction g = sdr_grid(f);
  CHECK(g.v[0] == 1.0);
  CHECK(g.v[1] == 4.0);
  CHECK(g.v[2] == 3.0);
  CHECK(g.v[3] == 1.0);
}

TEST_CASE("rearrangement is equimeasurable, idempotent, and radially monotone") {
  Rng rng(21);
  for (int d = 1; d <= 3; ++d) {
    const Lattice lat{d, d == 3 ? 8 : 16, 1.0};
    for (int trial = 0; trial < 5; ++trial) {
      const GridFunction f = random_grid(lat, rng);
      const GridFunction g = sdr_grid(f);
      CHECK(sorted_values(f) == sorted_values(g));

      const GridFunction gg = sdr_grid(g);
      CHECK(gg.v == g.v);

      const auto order = radial_order(lat);
      for (std::size_t k = 1; k < order.size(); ++k)
        CHECK(g.v[order[k]] <= g.v[order[k - 1]]);
    }
  }
}

TEST_CASE("rearrangement contracts the sup distance") {
  Rng rng(22);
  const Lattice lat{2, 16, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const GridFunction f = random_grid(lat, rng);
    const GridFunction g = random_grid(lat, rng);
    CHECK(sup_distance(sdr_grid(f), sdr_grid(g)) <= sup_distance(f, g) + 1e-15);
  }
}

TEST_CASE("set rearrangement agrees with the function rearrangement") {
  Rng rng(23);
  const Lattice lat{2, 12, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    const GridSet a = random_set(lat, rng);
    const GridSet astar = sdr_set(a);
    CHECK(astar.count() == a.count());
    const GridFunction g = sdr_grid(indicator(a));
    for (std::size_t i = 0; i < lat.cell_count(); ++i)
      CHECK(static_cast<double>(astar.m[i]) == g.v[i]);
  }
}

TEST_CASE("sup and l1 distances on a two-cell example") {
  const Lattice lat{1, 2, 1.0};
  GridFunction f(lat), g(lat);
  f.v = {2.0, 0.0};
  g.v = {0.5, 1.0};
  CHECK(sup_distance(f, g) == 1.5);
  CHECK(l1_distance(f, g) == doctest::Approx(1.0 * (1.5 + 1.0)));
}

TEST_CASE("symmetric difference of offset unit disks matches the lens formula") {
  // Disks of radius 1 with centers 0.5 apart overlap in a lens of area
  // 2 acos(1/4) - sqrt(15)/4; the symmetric difference is 2 pi minus twice
  // that, about 1.97897. The raster should land within an O(h) band.
  const Lattice lat{2, 512, 2.0};
  GridFunction a(lat), b(lat);
  for (std::size_t i = 0; i < lat.cell_count(); ++i) {
    const Point x = lat.center_flat(i);
    a.v[i] = x.norm() <= 1.0 ? 1.0 : 0.0;
    const double dx = x[0] - 0.5;
    b.v[i] = std::sqrt(dx * dx + x[1] * x[1]) <= 1.0 ? 1.0 : 0.0;
  }
  CHECK(l1_distance(a, b) == doctest::Approx(1.9789668571201684).epsilon(0.02));
}

TEST_CASE("modulus of continuity equals the all-pairs scan") {
  Rng rng(24);
  const Lattice lat{2, 8, 1.0};
  const GridFunction f = random_grid(lat, rng);
  for (double rho : {0.9 * lat.h(), 1.5 * lat.h(), 3.2 * lat.h()}) {
    double brute = 0.0;
    for (std::size_t i = 0; i < lat.cell_count(); ++i)
      for (std::size_t j = 0; j < lat.cell_count(); ++j) {
        if ((lat.center_flat(i) - lat.center_flat(j)).norm() <= rho)
          brute = std::max(brute, std::fabs(f.v[i] - f.v[j]));
      }
    CHECK(modulus_of_continuity(f, rho) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("level sets collect the cells strictly above the threshold") {
  const Lattice lat{1, 4, 1.0};
  GridFunction f(lat);
  f.v = {0.2, 0.5, 0.5, 0.9};
  const GridSet s = level_set(f, 0.5);
  CHECK(s.m == std::vector<std::uint8_t>{0, 0, 0, 1});
  const GridSet t = threshold_set(f, 0.1);
  CHECK(t.count() == 4);
}

TEST_CASE("cell norms match the center distances") {
  const Lattice lat{3, 6, 1.2};
  const auto norms = cell_norms(lat);
  REQUIRE(norms.size() == lat.cell_count());
  for (std::size_t i = 0; i < norms.size(); i += 11)
    CHECK(norms[i] == doctest::Approx(lat.center_flat(i).norm()).epsilon(1e-14));
}

TEST_CASE("interpolation reproduces centers and vanishes outside the box") {
  Rng rng(25);
  const Lattice lat{2, 8, 1.0};
  const GridFunction f = random_grid(lat, rng);
  for (std::size_t i = 0; i < lat.cell_count(); ++i)
    CHECK(f.value_at(lat.center_flat(i)) == f.v[i]);
  // Midpoint of two horizontally adjacent centers averages them.
  int idx[2] = {3, 4};
  Point x = lat.center(idx);
  x[0] += 0.5 * lat.h();
  int idx2[2] = {4, 4};
  CHECK(f.value_at(x) ==
        doctest::Approx(0.5 * (f.v[lat.to_flat(idx)] + f.v[lat.to_flat(idx2)])).epsilon(1e-14));
  CHECK(f.value_at(Vec{lat.L + lat.h(), 0.0}) == 0.0);
  CHECK(f.value_at(Vec{0.0, -lat.L - 2.0 * lat.h()}) == 0.0);
}

TEST_CASE("grid and set serialization round-trips bit for bit") {
  Rng rng(26);
  const Lattice lat{2, 8, 1.5};
  const GridFunction f = random_grid(lat, rng, -2.0, 2.0);
  const std::string fpath = "test_grid_roundtrip.grid";
  save_grid(f, fpath);
  const GridFunction g = load_grid(fpath);
  CHECK(g.lat.same(f.lat));
  CHECK(g.v == f.v);

  const GridSet a = random_set(lat, rng);
  const std::string spath = "test_grid_roundtrip.set";
  save_set(a, spath);
  const GridSet b = load_set(spath);
  CHECK(b.lat.same(a.lat));
  CHECK(b.m == a.m);
  std::remove(fpath.c_str());
  std::remove(spath.c_str());
}
