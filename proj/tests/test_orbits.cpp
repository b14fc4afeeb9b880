#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "lab/errors.hpp"
#include "lab/orbits.hpp"
#include "lab/vec.hpp"

using namespace lab;

namespace {

bool contains_close(const std::vector<Vec>& pts, const Vec& x, double tol) {
  for (const Vec& p : pts)
    if ((p - x).norm() <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("a single direction folds the start onto at most two points") {
  const Direction u = Direction(Vec{1.0, 0.0});
  const Direction x = Direction(Vec{0.6, 0.8});
  const auto orbit = orbit_expand({u}, x, 100);
  // Folding along u either fixes x or sends it to its mirror; the closure
  // stabilizes at {x, sigma x}.
  CHECK(orbit.size() <= 2);
  CHECK(contains_close(orbit, x.vec(), 1e-12));
  CHECK(contains_close(orbit, Vec{-0.6, 0.8}, 1e-12));
}

TEST_CASE("directions that already fix the start add nothing") {
  // <x, u> < 0 keeps x on the kept side of every fold.
  const Direction x = Direction(Vec{-1.0, 0.0});
  const auto orbit = orbit_expand({Direction(Vec{1.0, 0.0})}, x, 100);
  REQUIRE(orbit.size() == 1);
  CHECK((orbit[0] - x.vec()).norm() == 0.0);
}

TEST_CASE("folds without sign pairs settle into the common kept cone") {
  // A fold only moves points toward its kept side, so a set without both
  // signs of a hyperplane stabilizes after finitely many reflections.
  const std::vector<Direction> g = {Direction(Vec{1.0, 0.0}),
                                    Direction(Vec{std::cos(1.0), std::sin(1.0)})};
  const Direction x = Direction(Vec{std::cos(0.3), std::sin(0.3)});
  const auto orbit = orbit_expand(g, x, 100000);
  CHECK(orbit.size() == 4);
}

TEST_CASE("orbit points stay on the sphere and smaller budgets are prefixes") {
  // Each direction paired with its negation: the two folds across one
  // hyperplane compose to the full reflection and the orbit becomes a group
  // orbit, dense when an angle is an irrational multiple of pi.
  const std::vector<Direction> g = make_direction_set(
      {Direction(Vec{1.0, 0.0}), Direction(Vec{-1.0, 0.0}),
       Direction(Vec{std::cos(1.0), std::sin(1.0)}),
       Direction(Vec{-std::cos(1.0), -std::sin(1.0)})});
  const Direction x = Direction(Vec{std::cos(0.3), std::sin(0.3)});
  const auto big = orbit_expand(g, x, 5000);
  CHECK(big.size() > 100);
  for (const Vec& p : big) CHECK(std::fabs(p.norm() - 1.0) < 1e-9);
  for (std::size_t budget : {10UL, 100UL, 1000UL}) {
    const auto small = orbit_expand(g, x, budget);
    REQUIRE(small.size() <= budget);
    REQUIRE(small.size() <= big.size());
    for (std::size_t i = 0; i < small.size(); ++i)
      CHECK((small[i] - big[i]).norm() == 0.0);
  }
}

TEST_CASE("covering radius shrinks as the orbit grows") {
  const std::vector<Direction> g = {
      Direction(Vec{1.0, 0.0}), Direction(Vec{-1.0, 0.0}),
      Direction(Vec{std::cos(1.0), std::sin(1.0)}),
      Direction(Vec{-std::cos(1.0), -std::sin(1.0)})};
  const Direction x = Direction(Vec{std::cos(0.3), std::sin(0.3)});
  double prev = 1e300;
  for (std::size_t budget : {100UL, 1000UL, 10000UL}) {
    const auto orbit = orbit_expand(g, x, budget);
    const double r = covering_radius(orbit, 4096);
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
  CHECK(prev < 0.05);
  CHECK_THROWS_AS(covering_radius({}, 64), EmptySet);
}

TEST_CASE("equispaced samples have the predicted covering radius") {
  // 64 points evenly spaced on the circle: every probe sits within pi/64.
  std::vector<Vec> pts;
  for (int k = 0; k < 64; ++k) {
    const double t = 2.0 * M_PI * k / 64.0;
    pts.push_back(Vec{std::cos(t), std::sin(t)});
  }
  const double r = covering_radius(pts, 8192);
  CHECK(r <= M_PI / 64.0 + 1e-9);
  CHECK(r >= M_PI / 64.0 - 2.0 * M_PI / 8192.0 - 1e-9);
}

TEST_CASE("the axis pair fails every density screen") {
  const auto rep = generating_heuristics(
      {Direction(Vec{1.0, 0.0}), Direction(Vec{0.0, 1.0})}, 100);
  CHECK(rep.spans);
  CHECK_FALSE(rep.no_orthogonal_split);  // two orthogonal singletons
  CHECK_FALSE(rep.irrational_angle);     // pi/2 is exactly rational in pi
}

TEST_CASE("an angle of one radian passes the rationality screen") {
  const auto rep = generating_heuristics(
      {Direction(Vec{1.0, 0.0}), Direction(Vec{std::cos(1.0), std::sin(1.0)})},
      10000);
  CHECK(rep.spans);
  CHECK(rep.no_orthogonal_split);
  CHECK(rep.irrational_angle);
  // Sharpest rational approach to 1/pi with q <= 10000 is 113/355.
  CHECK(rep.best_margin == doctest::Approx(8.4913671301080177e-08).epsilon(1e-9));
}

TEST_CASE("collinear directions fail the span screen") {
  const auto rep = generating_heuristics(
      {Direction(Vec{1.0, 0.0}), Direction(Vec{-1.0, 0.0})}, 100);
  CHECK_FALSE(rep.spans);
}

TEST_CASE("direction sets are validated") {
  CHECK_THROWS_AS(make_direction_set({}), ConfigError);
  CHECK_THROWS_AS(make_direction_set({Direction(Vec{1.0, 0.0}),
                                      Direction(Vec{1.0, 1e-12})}),
                  ConfigError);
}
