#include "lab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "lab/errors.hpp"

namespace lab {

namespace {

constexpr double kW = 640.0, kH = 480.0;
constexpr double kLeft = 70.0, kRight = 160.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double t(double v) const {  // data -> [0,1]
    double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }
};

Axis fit_axis(bool log, double mn, double mx) {
  Axis ax;
  ax.log = log;
  if (log) {
    mn = std::log10(mn);
    mx = std::log10(mx);
  }
  if (!(mx > mn)) {
    mn -= 1.0;
    mx += 1.0;
  }
  double pad = 0.05 * (mx - mn);
  ax.lo = mn - pad;
  ax.hi = mx + pad;
  return ax;
}

std::vector<double> axis_ticks(const Axis& ax) {
  std::vector<double> t;
  if (ax.log) {
    int a = static_cast<int>(std::ceil(ax.lo));
    int b = static_cast<int>(std::floor(ax.hi));
    int stride = std::max(1, (b - a) / 6 + 1);
    for (int e = a; e <= b; e += stride) t.push_back(std::pow(10.0, e));
    if (t.empty()) t.push_back(std::pow(10.0, 0.5 * (ax.lo + ax.hi)));
    return t;
  }
  double span = ax.hi - ax.lo;
  double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
  if (span / step > 10.0) step *= 2.0;
  if (span / step > 10.0) step *= 2.5;
  double v = std::ceil(ax.lo / step) * step;
  for (; v <= ax.hi + 1e-12 * span; v += step) t.push_back(v);
  return t;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '&') o += "&amp;";
    else if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else o += c;
  }
  return o;
}

}  // namespace

void write_line_chart(const std::string& path, const ChartSpec& spec,
                      const std::vector<ChartSeries>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);

  auto usable = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (spec.log_x && !(x > 0.0)) return false;
    if (spec.log_y && !(y > 0.0)) return false;
    return true;
  };

  double xmn = std::numeric_limits<double>::infinity(), xmx = -xmn;
  double ymn = xmn, ymx = -xmn;
  for (const ChartSeries& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (usable(s.x[i], s.y[i])) {
        xmn = std::min(xmn, s.x[i]);
        xmx = std::max(xmx, s.x[i]);
        ymn = std::min(ymn, s.y[i]);
        ymx = std::max(ymx, s.y[i]);
      }
  if (!(xmn <= xmx)) throw ConfigError("chart has no drawable points: " + path);

  Axis xa = fit_axis(spec.log_x, xmn, xmx);
  Axis ya = fit_axis(spec.log_y, ymn, ymx);
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double v) { return kLeft + pw * xa.t(v); };
  auto py = [&](double v) { return kTop + ph * (1.0 - ya.t(v)); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << ' '
      << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << esc(spec.title) << "</text>\n";

  for (double v : axis_ticks(xa)) {
    double X = px(v);
    out << "<line x1=\"" << num(X) << "\" y1=\"" << kTop << "\" x2=\"" << num(X)
        << "\" y2=\"" << kTop + ph << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << num(X) << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  for (double v : axis_ticks(ya)) {
    double Y = py(v);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << num(Y) << "\" x2=\""
        << kLeft + pw << "\" y2=\"" << num(Y) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(Y + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\">" << esc(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kTop + ph / 2
      << ")\">" << esc(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts;
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      if (!usable(series[s].x[i], series[s].y[i])) continue;
      pts += num(px(series[s].x[i]));
      pts += ',';
      pts += num(py(series[s].y[i]));
      pts += ' ';
    }
    if (!pts.empty())
      out << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
    double ly = kTop + 14 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << num(ly - 4)
        << "\" x2=\"" << kLeft + pw + 30 << "\" y2=\"" << num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 34 << "\" y=\"" << num(ly) << "\">"
        << esc(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace lab
