#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lab/ellipsoid.hpp"
#include "lab/errors.hpp"
#include "lab/grid.hpp"
#include "lab/metrics.hpp"
#include "lab/polarize.hpp"
#include "lab/rng.hpp"
#include "lab/smallmat.hpp"
#include "lab/steiner.hpp"

using namespace lab;

namespace {

GridFunction random_grid(const Lattice& lat, Rng& rng) {
  GridFunction f(lat);
  for (double& v : f.v) v = rng.uniform01();
  return f;
}

Mat random_spd(int d, Rng& rng, double lo = 0.2, double hi = 3.0) {
  // Congruence of a diagonal by random rotations keeps it positive definite.
  Mat m = Mat::diag([&] {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.uniform(lo, hi);
    return v;
  }());
  for (int rot = 0; rot < 3 * d; ++rot) {
    const int a = static_cast<int>(rng.uniform01() * d) % d;
    int b = static_cast<int>(rng.uniform01() * d) % d;
    if (a == b) b = (b + 1) % d;
    const double t = rng.uniform(0.0, 2.0 * M_PI);
    const double c = std::cos(t), s = std::sin(t);
    Mat r = Mat::identity(d);
    r.at(a, a) = c;
    r.at(a, b) = -s;
    r.at(b, a) = s;
    r.at(b, b) = c;
    // m <- r m r^T
    Mat tmp(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += r.at(i, k) * m.at(k, j);
        tmp.at(i, j) = acc;
      }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += tmp.at(i, k) * r.at(j, k);
        m.at(i, j) = acc;
      }
    m.symmetrize();
  }
  return m;
}

std::vector<double> sorted_values(const GridFunction& f) {
  std::vector<double> s = f.v;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("one-dimensional symmetrization matches the hand-built placement") {
  const Lattice lat{1, 5, 1.0};
  GridFunction f(lat);
  f.v = {0.0, 3.0, 1.0, 2.0, 0.0};
  const GridFunction g = steiner_grid(f, Direction::axis(1, 0));
  CHECK(g.v == std::vector<double>{0.0, 2.0, 3.0, 1.0, 0.0});
}

TEST_CASE("axis symmetrization is equimeasurable and mass-exact") {
  Rng rng(41);
  const Lattice lat{2, 16, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction f = random_grid(lat, rng);
    const int axis = trial % 2;
    const GridFunction g = steiner_grid(f, Direction::axis(2, axis));
    CHECK(sorted_values(g) == sorted_values(f));
    // Each line is symmetric decreasing about the box midpoint.
    const GridFunction gg = steiner_grid(g, Direction::axis(2, axis));
    CHECK(gg.v == g.v);
  }
}

TEST_CASE("axis symmetrization lowers the moment at least as much as any mirror") {
  Rng rng(42);
  const Lattice lat{2, 16, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction f = random_grid(lat, rng);
    const int axis = trial % 2;
    const GridFunction st = steiner_grid(f, Direction::axis(2, axis));
    const double mst = radial_moment(st);
    CHECK(mst <= radial_moment(f) + 1e-12);
    for (int m = 1; m < 8; ++m) {
      const PolarParam w{m * lat.h(), Direction::axis(2, axis)};
      CHECK(mst <= radial_moment(polarize_grid(f, w, PolarizeMode::MirrorExact)) + 1e-12);
    }
  }
}

TEST_CASE("set symmetrization counts cells like the indicator") {
  Rng rng(43);
  const Lattice lat{2, 12, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    GridSet a(lat);
    for (auto& b : a.m) b = rng.uniform01() < 0.4 ? 1 : 0;
    const GridSet s = steiner_set(a, Direction::axis(2, trial % 2));
    CHECK(s.count() == a.count());
    const GridFunction g = steiner_grid(indicator(a), Direction::axis(2, trial % 2));
    for (std::size_t i = 0; i < lat.cell_count(); ++i)
      CHECK(static_cast<double>(s.m[i]) == g.v[i]);
  }
}

TEST_CASE("the flattened quadratic form matches the worked example") {
  const Mat m = Mat::diag(Vec{2.0, 0.5});
  const Direction u = Direction(Vec{1.0, 1.0});
  const Mat mp = steiner_ellipsoid(m, u);
  CHECK(mp.at(0, 0) == doctest::Approx(1.025).epsilon(1e-12));
  CHECK(mp.at(0, 1) == doctest::Approx(0.225).epsilon(1e-12));
  CHECK(mp.at(1, 0) == doctest::Approx(0.225).epsilon(1e-12));
  CHECK(mp.at(1, 1) == doctest::Approx(1.025).epsilon(1e-12));

  // Eigenvalues via the characteristic polynomial, independent of the
  // iterative solver: x^2 - tr x + det with tr 2.05 and det 1.
  const double tr = mp.at(0, 0) + mp.at(1, 1);
  const double dt = mp.at(0, 0) * mp.at(1, 1) - mp.at(0, 1) * mp.at(1, 0);
  const double disc = std::sqrt(tr * tr - 4.0 * dt);
  CHECK(0.5 * (tr + disc) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(0.5 * (tr - disc) == doctest::Approx(0.8).epsilon(1e-12));

  const GapInfo g = eigen_gap(mp);
  CHECK(g.lmax == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(g.lmin == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(g.gap == doctest::Approx(0.45).epsilon(1e-10));

  CHECK(eval_gap_bound(m, u) == doctest::Approx(-1.125).epsilon(1e-10));
}

TEST_CASE("eigen decomposition certifies itself") {
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 4;
    const Mat m = random_spd(d, rng);
    const EigenSym e = jacobi_eigen(m);
    for (int i = 0; i < d; ++i) {
      if (i) CHECK(e.values[i] >= e.values[i - 1]);
      // Residual |M v - lambda v| and pairwise orthonormality.
      const Vec& v = e.vectors[i];
      const Vec mv = m.mul(v);
      double res = 0.0;
      for (int k = 0; k < d; ++k) res += (mv[k] - e.values[i] * v[k]) * (mv[k] - e.values[i] * v[k]);
      CHECK(std::sqrt(res) < 1e-10);
      for (int j = 0; j <= i; ++j)
        CHECK(std::fabs(dot(e.vectors[i], e.vectors[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("flattening preserves the determinant and squeezes the spectrum") {
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 4;
    const Mat m = random_spd(d, rng);
    const Direction u = Direction(rng.sphere_uniform(d));
    const Mat mp = steiner_ellipsoid(m, u);

    CHECK(det(mp) == doctest::Approx(det(m)).epsilon(1e-10));
    const GapInfo before = eigen_gap(m), after = eigen_gap(mp);
    CHECK(after.lmax <= before.lmax + 1e-10);
    CHECK(after.lmin >= before.lmin - 1e-10);

    // u is an eigenvector of the new form with eigenvalue <u, M u>.
    const double lam = m.quad(u.vec());
    const Vec mpu = mp.mul(u.vec());
    double res = 0.0;
    for (int k = 0; k < d; ++k) res += (mpu[k] - lam * u[k]) * (mpu[k] - lam * u[k]);
    CHECK(std::sqrt(res) < 1e-9);

    CHECK(eval_gap_bound(m, u) <= after.gap + 1e-10);
  }
}

TEST_CASE("two-dimensional ellipsoids reach the ball in one closed-form step") {
  const Mat m = Mat::diag(Vec{2.0, 0.5});
  const auto dirs = ellipsoid_to_ball(m);
  REQUIRE(dirs.size() == 1);
  // <u, M u> must equal 1, which pins the component split at 1/3 and 2/3.
  CHECK(dirs[0][0] * dirs[0][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(dirs[0][1] * dirs[0][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  Mat cur = steiner_ellipsoid(m, dirs[0]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::fabs(cur.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-8);
}

TEST_CASE("higher-dimensional ellipsoids reach the ball in d-1 steps") {
  const Mat m = Mat::diag(Vec{4.0, 1.0, 0.25});
  const auto dirs = ellipsoid_to_ball(m);
  REQUIRE(dirs.size() == 2);
  Mat cur = m;
  for (const Direction& u : dirs) cur = steiner_ellipsoid(cur, u);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::fabs(cur.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-8);

  CHECK_THROWS_AS(ellipsoid_to_ball(Mat::diag(Vec{2.0, 1.0})), NotUnitDeterminant);
}

TEST_CASE("already round inputs need no steps") {
  const auto dirs = ellipsoid_to_ball(Mat::identity(3));
  Mat cur = Mat::identity(3);
  for (const Direction& u : dirs) cur = steiner_ellipsoid(cur, u);
  CHECK(dirs.size() == 2);
  for (int i = 0; i < 3; ++i) CHECK(cur.at(i, i) == doctest::Approx(1.0).epsilon(1e-12));
}
