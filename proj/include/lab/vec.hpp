#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace lab {

// All experiments run in dimension d <= kMaxDim; vectors carry their runtime
// dimension in a fixed-capacity buffer so they can live on the stack in hot
// loops.
inline constexpr int kMaxDim = 8;

class Vec {
 public:
  Vec() = default;
  explicit Vec(int d) : d_(d) {
    assert(d >= 1 && d <= kMaxDim);
    c_.fill(0.0);
  }
  Vec(std::initializer_list<double> xs) : d_(static_cast<int>(xs.size())) {
    assert(d_ >= 1 && d_ <= kMaxDim);
    c_.fill(0.0);
    int i = 0;
    for (double x : xs) c_[i++] = x;
  }

  int dim() const { return d_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < d_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < d_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < d_; ++i) c_[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }

  // Accumulation runs in fixed index order: every caller sees the same
  // rounding, which keeps orderings derived from norms reproducible.
  friend double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.d_; ++i) s += a.c_[i] * b.c_[i];
    return s;
  }

  double norm2() const { return dot(*this, *this); }
  double norm() const { return std::sqrt(norm2()); }

 private:
  std::array<double, kMaxDim> c_{};
  int d_ = 0;
};

using Point = Vec;

inline Vec basis_vec(int d, int k, double sign = 1.0) {
  Vec e(d);
  e[k] = sign;
  return e;
}

// Unit vector on the direction sphere. Construction renormalizes, so drift
// from repeated arithmetic never accumulates past one rounding step.
class Direction {
 public:
  Direction() = default;
  explicit Direction(const Vec& v) : u_(v) {
    double n = u_.norm();
    if (!(n > 1e-14)) throw std::invalid_argument("Direction: zero vector");
    u_ *= 1.0 / n;
  }
  static Direction axis(int d, int k, double sign = 1.0) {
    return Direction(basis_vec(d, k, sign));
  }

  int dim() const { return u_.dim(); }
  double operator[](int i) const { return u_[i]; }
  const Vec& vec() const { return u_; }

 private:
  Vec u_;
};

// Reflection parameter (r, u): the mirror hyperplane is <z,u> = r/2, i.e. the
// reflection maps the origin to the point with polar coordinates (r, u).
// r > 0 for polarization; r = 0 only labels the degenerate folding map.
struct PolarParam {
  double r = 0.0;
  Direction u;
};

}  // namespace lab
