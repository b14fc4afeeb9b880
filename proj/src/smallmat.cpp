#include "lab/smallmat.hpp"

#include <algorithm>
#include <cmath>

namespace lab {

EigenSym jacobi_eigen(const Mat& m, double tol) {
  int d = m.dim();
  Mat a = m;
  a.symmetrize();
  Mat v = Mat::identity(d);

  double scale = 0.0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, std::abs(a.at(i, i)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) scale = std::max(scale, std::abs(a.at(i, j)));
  double thresh = tol * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) off = std::max(off, std::abs(a.at(i, j)));
    if (off <= thresh) break;
    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        double apq = a.at(p, q);
        if (std::abs(apq) <= thresh * 1e-3) continue;
        double theta = 0.5 * (a.at(q, q) - a.at(p, p)) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < d; ++k) {
          double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < d; ++k) {
          double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < d; ++k) {
          double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, kMaxDim> order{};
  for (int i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.begin() + d,
            [&](int i, int j) { return a.at(i, i) < a.at(j, j); });

  EigenSym e;
  e.d = d;
  e.values = Vec(d);
  for (int k = 0; k < d; ++k) {
    int c = order[k];
    e.values[k] = a.at(c, c);
    Vec ev(d);
    for (int i = 0; i < d; ++i) ev[i] = v.at(i, c);
    int imax = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(ev[i]) > std::abs(ev[imax])) imax = i;
    if (ev[imax] < 0.0) ev *= -1.0;
    e.vectors[k] = ev;
  }
  return e;
}

double det(const Mat& m) {
  int d = m.dim();
  Mat a = m;
  double sign = 1.0;
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(a.at(r, c)) > std::abs(a.at(piv, c))) piv = r;
    if (a.at(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < d; ++k) std::swap(a.at(piv, k), a.at(c, k));
      sign = -sign;
    }
    for (int r = c + 1; r < d; ++r) {
      double f = a.at(r, c) / a.at(c, c);
      for (int k = c; k < d; ++k) a.at(r, k) -= f * a.at(c, k);
    }
  }
  double p = sign;
  for (int i = 0; i < d; ++i) p *= a.at(i, i);
  return p;
}

}  // namespace lab
