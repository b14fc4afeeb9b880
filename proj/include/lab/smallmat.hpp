#pragma once

#include <array>

#include "lab/vec.hpp"

namespace lab {

// Dense d x d matrix, d <= kMaxDim. Big enough for every experiment, small
// enough that a hand-rolled Jacobi sweep beats pulling in a linear-algebra
// dependency.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int d) : d_(d) { a_.fill(0.0); }

  static Mat identity(int d) {
    Mat m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }
  static Mat diag(const Vec& v) {
    Mat m(v.dim());
    for (int i = 0; i < v.dim(); ++i) m.at(i, i) = v[i];
    return m;
  }
  static Mat scaled_identity(int d, double s) {
    Mat m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = s;
    return m;
  }

  int dim() const { return d_; }
  double at(int i, int j) const { return a_[i * kMaxDim + j]; }
  double& at(int i, int j) { return a_[i * kMaxDim + j]; }

  Vec mul(const Vec& x) const {
    Vec y(d_);
    for (int i = 0; i < d_; ++i) {
      double s = 0.0;
      for (int j = 0; j < d_; ++j) s += at(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  // <x, Mx>
  double quad(const Vec& x) const { return dot(x, mul(x)); }

  void symmetrize() {
    for (int i = 0; i < d_; ++i)
      for (int j = i + 1; j < d_; ++j) {
        double v = 0.5 * (at(i, j) + at(j, i));
        at(i, j) = v;
        at(j, i) = v;
      }
  }

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  int d_ = 0;
};

struct EigenSym {
  Vec values;                          // ascending
  std::array<Vec, kMaxDim> vectors;    // vectors[k] pairs with values[k]
  int d = 0;
};

// Cyclic Jacobi sweeps until every off-diagonal entry is below tol relative
// to the matrix scale. Eigenvector signs are canonicalized (largest-magnitude
// component positive) so repeated runs agree bit for bit.
EigenSym jacobi_eigen(const Mat& m, double tol = 1e-12);

// Determinant by LU with partial pivoting.
double det(const Mat& m);

}  // namespace lab
