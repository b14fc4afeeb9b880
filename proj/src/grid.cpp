#include "lab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace lab {

double GridFunction::value_at(const Point& x) const {
  const int d = lat.d;
  const int n = lat.n;
  const double h = lat.h();

  // Fractional cell coordinate: t = (x+L)/h - 1/2, so t = i at the center of
  // cell i. Corners outside [0,n) contribute 0.
  int base[kMaxDim];
  double frac[kMaxDim];
  for (int k = 0; k < d; ++k) {
    const double t = (x[k] + lat.L) / h - 0.5;
    const double fl = std::floor(t);
    base[k] = static_cast<int>(fl);
    frac[k] = t - fl;
    if (base[k] < -1 || base[k] > n - 1) return 0.0;
  }

  double acc = 0.0;
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    bool inside = true;
    for (int k = 0; k < d; ++k) {
      const int bit = (c >> k) & 1;
      const int i = base[k] + bit;
      w *= bit ? frac[k] : 1.0 - frac[k];
      if (i < 0 || i >= n) {
        inside = false;
        break;
      }
      flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
    if (inside && w != 0.0) acc += w * v[flat];
  }
  return acc;
}

double GridFunction::max_value() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::size_t GridSet::count() const {
  std::size_t c = 0;
  for (std::uint8_t b : m) c += b;
  return c;
}

GridFunction indicator(const GridSet& a) {
  GridFunction f(a.lat);
  for (std::size_t i = 0; i < a.m.size(); ++i) f.v[i] = a.m[i] ? 1.0 : 0.0;
  return f;
}

GridSet threshold_set(const GridFunction& f, double t) {
  GridSet a(f.lat);
  for (std::size_t i = 0; i < f.v.size(); ++i) a.m[i] = f.v[i] > t ? 1 : 0;
  return a;
}

std::vector<double> cell_norms(const Lattice& lat) {
  const std::size_t total = lat.cell_count();
  std::vector<double> norms(total);
  int idx[kMaxDim] = {0};
  for (std::size_t i = 0; i < total; ++i) {
    norms[i] = lat.center(idx).norm();
    for (int k = lat.d - 1; k >= 0; --k) {
      if (++idx[k] < lat.n) break;
      idx[k] = 0;
    }
  }
  return norms;
}

namespace {

void write_doubles(std::ofstream& out, const double* p, std::size_t count) {
  out.write(reinterpret_cast<const char*>(p),
            static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* p, std::size_t count) {
  in.read(reinterpret_cast<char*>(p),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw Error("truncated grid file");
}

void save_header(std::ofstream& out, const Lattice& lat) {
  const double dd = lat.d;
  const double ll = lat.L;
  const std::uint64_t nn = static_cast<std::uint64_t>(lat.n);
  write_doubles(out, &dd, 1);
  write_doubles(out, &ll, 1);
  out.write(reinterpret_cast<const char*>(&nn), sizeof nn);
}

Lattice load_header(std::ifstream& in) {
  double dd = 0.0, ll = 0.0;
  std::uint64_t nn = 0;
  read_doubles(in, &dd, 1);
  read_doubles(in, &ll, 1);
  in.read(reinterpret_cast<char*>(&nn), sizeof nn);
  if (!in) throw Error("truncated grid file");
  Lattice lat;
  lat.d = static_cast<int>(dd);
  lat.n = static_cast<int>(nn);
  lat.L = ll;
  if (lat.d < 1 || lat.d > kMaxDim || lat.n < 1 || !(lat.L > 0.0))
    throw Error("bad grid header");
  return lat;
}

}  // namespace

void save_grid(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  save_header(out, f.lat);
  write_doubles(out, f.v.data(), f.v.size());
  if (!out) throw Error("write failed: " + path);
}

GridFunction load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  const Lattice lat = load_header(in);
  GridFunction f(lat);
  read_doubles(in, f.v.data(), f.v.size());
  return f;
}

void save_set(const GridSet& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path);
  save_header(out, a.lat);
  std::vector<double> buf(a.m.size());
  for (std::size_t i = 0; i < a.m.size(); ++i) buf[i] = a.m[i] ? 1.0 : 0.0;
  write_doubles(out, buf.data(), buf.size());
  if (!out) throw Error("write failed: " + path);
}

GridSet load_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  const Lattice lat = load_header(in);
  GridSet a(lat);
  std::vector<double> buf(a.m.size());
  read_doubles(in, buf.data(), buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) a.m[i] = buf[i] > 0.5 ? 1 : 0;
  return a;
}

}  // namespace lab
