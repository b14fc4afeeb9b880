#include "lab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "lab/errors.hpp"
#include "lab/geometry.hpp"
#include "lab/steiner.hpp"

namespace lab {

namespace {

constexpr std::uint64_t kPoissonBudget = 1000000;

// CDF of the chi density x^(d-1) e^(-x^2/2) on [0, 16], trapezoid-integrated
// on 2^16 subintervals and normalized. 16 standard deviations covers every
// d <= kMaxDim to far below the table's own resolution.
struct ChiTable {
  static constexpr int kNodes = 1 << 16;
  double dx;
  std::vector<double> cdf;  // kNodes + 1 values, cdf[0] = 0, cdf[kNodes] = 1

  explicit ChiTable(int d) : dx(16.0 / kNodes), cdf(kNodes + 1) {
    std::vector<double> dens(kNodes + 1);
    for (int i = 0; i <= kNodes; ++i) {
      const double x = i * dx;
      dens[i] = std::pow(x, d - 1) * std::exp(-0.5 * x * x);
    }
    cdf[0] = 0.0;
    for (int i = 1; i <= kNodes; ++i)
      cdf[i] = cdf[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * dx;
    const double total = cdf[kNodes];
    for (int i = 0; i <= kNodes; ++i) cdf[i] /= total;
  }

  double quantile(double p) const {
    // cdf is nondecreasing; find the bracketing node and interpolate.
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), p);
    if (it == cdf.begin()) return 0.0;
    const std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
    const double c0 = cdf[hi - 1];
    const double c1 = cdf[hi];
    const double frac = c1 > c0 ? (p - c0) / (c1 - c0) : 0.0;
    return (static_cast<double>(hi - 1) + frac) * dx;
  }
};

const ChiTable& chi_table(int d) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ChiTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[d];
  if (!slot) slot = std::make_unique<ChiTable>(d);
  return *slot;
}

double gaussian_t(const GaussianPolarSpec& g, int d, std::uint64_t i) {
  switch (g.schedule) {
    case GaussianSchedule::Constant:
      return g.t0;
    case GaussianSchedule::LogLogInverse: {
      const std::uint64_t j = std::max<std::uint64_t>(i, 3);
      return 1.0 / std::log(std::log(static_cast<double>(j)));
    }
    case GaussianSchedule::PowerTwoOverD:
      return g.t0 * std::pow(static_cast<double>(i), 2.0 / d);
  }
  return g.t0;
}

double poisson_norm(const PoissonDirectionSpec& p, std::uint64_t i) {
  if (p.schedule == PoissonSchedule::ApproachOne)
    return 1.0 - 1.0 / static_cast<double>(std::max<std::uint64_t>(i, 1));
  return p.z0;
}

Direction poisson_draw(const PoissonDirectionSpec& p, int d, std::uint64_t i,
                       Rng& rng) {
  const double z = poisson_norm(p, i);
  if (z <= 0.0) return rng.sphere_uniform(d);  // kernel degenerates to uniform
  const Vec zp = z * p.pole.vec();
  const double envelope =
      std::pow(1.0 + z, d) / std::pow(1.0 - z, d - 1);
  for (std::uint64_t k = 0; k < kPoissonBudget; ++k) {
    const Direction v = rng.sphere_uniform(d);
    const double dist = (zp - v.vec()).norm();
    const double dens = (1.0 - z * z) / std::pow(dist, d);
    if (rng.uniform01() * envelope < dens) return v;
  }
  throw RejectionBudgetExceeded("pole too close to the sphere");
}

}  // namespace

PolarParam sample(const SamplerSpec& spec, int d, std::uint64_t i, Rng& rng) {
  if (const auto* u = std::get_if<UniformPolarSpec>(&spec)) {
    // r first, then the direction, so replay is draw-for-draw stable
    const double r = 2.0 * u->L * (1.0 - rng.uniform01());  // in (0, 2L]
    return PolarParam{r, rng.sphere_uniform(d)};
  }
  if (std::get_if<UniformDirectionSpec>(&spec)) {
    return PolarParam{0.0, rng.sphere_uniform(d)};
  }
  if (const auto* g = std::get_if<GaussianPolarSpec>(&spec)) {
    const double t = gaussian_t(*g, d, i);
    const double r = std::sqrt(t) * chi_table(d).quantile(rng.uniform01());
    return PolarParam{r, rng.sphere_uniform(d)};
  }
  if (const auto* p = std::get_if<PoissonDirectionSpec>(&spec)) {
    return PolarParam{0.0, poisson_draw(*p, d, i, rng)};
  }
  const auto& f = std::get<FiniteIIDSpec>(spec);
  if (f.directions.empty()) throw ConfigError("empty direction set");
  const std::size_t idx = std::min(
      f.directions.size() - 1,
      static_cast<std::size_t>(rng.uniform01() *
                               static_cast<double>(f.directions.size())));
  const double r = f.r_max * (1.0 - rng.uniform01());
  return PolarParam{r, f.directions[idx]};
}

AdversarialConeDriver::AdversarialConeDriver(SamplerSpec base, int d,
                                             double eps, Rng rng)
    : base_(std::move(base)), d_(d), eps_(eps), rng_(rng) {}

PolarParam AdversarialConeDriver::next(const Point& apex) {
  (void)apex;  // the shrunken-radius fold keeps the apex safe for any apex
  ++emitted_;
  if (!have_pending_) {
    ++pair_;
    draws_.push_back(sample(base_, d_, pair_, rng_));
    have_pending_ = true;
    const PolarParam& w = draws_.back();
    // Radius min(eps 2^-n, r_n): the fold moves the apex by at most that,
    // and afterwards <apex,u> <= rho/2 <= r_n/2, so the base reflection next
    // step fixes the apex. The positive sign realizes the required choice.
    double rho = std::min(std::ldexp(eps_, -static_cast<int>(
                                               std::min<std::uint64_t>(pair_, 1060))),
                          w.r);
    if (rho <= 0.0) rho = std::numeric_limits<double>::min();
    return PolarParam{rho, w.u};
  }
  have_pending_ = false;
  positions_.push_back(emitted_);
  return draws_.back();
}

AdversarialSteinerDriver::AdversarialSteinerDriver(SamplerSpec base, int d,
                                                   double eps, const Mat& m0,
                                                   Rng rng)
    : base_(std::move(base)), d_(d), eps_(eps), rng_(rng) {
  const GapInfo g = eigen_gap(m0);
  const double c = 1.0 + g.lmax / g.lmin;
  const double s = std::sin(eps);
  if (!((c + 2.0) * s * s < 1.0))
    throw PreconditionViolated("(C+2) sin^2(eps) must stay below 1");
}

Direction AdversarialSteinerDriver::next(const Mat& current) {
  ++emitted_;
  Vec w = eigen_gap(current).vmax;
  if (emitted_ == 1) return Direction(w);  // start at a maximizing eigenvector
  if (!have_target_) {
    ++served_;
    draws_.push_back(sample(base_, d_, served_, rng_).u);
    target_ = draws_.back();
    have_target_ = true;
  }
  // Either eigenvector orientation is valid; take the one facing the target
  // (also keeps the great-circle step away from the antipodal case).
  if (dot(w, target_.vec()) < 0.0) w *= -1.0;
  const Direction from(w);
  const double step = eps_ / static_cast<double>(emitted_);
  if (angular_distance(from, target_) <= step) {
    have_target_ = false;
    positions_.push_back(emitted_);
    return target_;
  }
  return great_circle_step(from, target_, step);
}

namespace {

double divergence_term(const SamplerSpec& spec, int d, double L,
                       std::uint64_t i) {
  if (const auto* g = std::get_if<GaussianPolarSpec>(&spec)) {
    const double t = gaussian_t(*g, d, i);
    return std::pow(t, -0.5 * d) * std::exp(-2.0 * L * L / t);
  }
  if (const auto* p = std::get_if<PoissonDirectionSpec>(&spec)) {
    return std::pow(2.0, -(d - 1)) * (1.0 - poisson_norm(*p, i));
  }
  throw UnsupportedSpec("divergence terms exist for the Gaussian and Poisson families");
}

}  // namespace

DivergenceAudit divergence_audit(const SamplerSpec& spec, int d, double L,
                                 std::size_t n_terms) {
  DivergenceAudit a;
  a.partial_sums.resize(n_terms);
  double acc = 0.0;
  for (std::size_t i = 1; i <= n_terms; ++i) {
    const double term = divergence_term(spec, d, L, i);
    if (term < 0.0) a.nonnegative_terms = false;
    acc += term;
    a.partial_sums[i - 1] = acc;
  }
  return a;
}

namespace {

// Blocked accumulation with eight lanes breaks the add latency chain; the
// block holding the crossing is rescanned serially for the exact index.
template <class Term>
std::uint64_t crossing_scan(Term term, double threshold, std::uint64_t cap) {
  constexpr std::uint64_t kBlock = 8192;
  double acc = 0.0;
  std::uint64_t i = 1;
  while (i <= cap) {
    const std::uint64_t end = std::min(cap, i + kBlock - 1);
    double lane[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    std::uint64_t j = i;
    for (; j + 7 <= end; j += 8)
      for (int k = 0; k < 8; ++k) lane[k] += term(j + static_cast<std::uint64_t>(k));
    double tail = 0.0;
    for (; j <= end; ++j) tail += term(j);
    const double block = (((lane[0] + lane[1]) + (lane[2] + lane[3])) +
                          ((lane[4] + lane[5]) + (lane[6] + lane[7]))) +
                         tail;
    if (acc + block > threshold) {
      double fine = acc;
      for (std::uint64_t k = i; k <= end; ++k) {
        fine += term(k);
        if (fine > threshold) return k;
      }
    }
    acc += block;
    i = end + 1;
  }
  return 0;
}

}  // namespace

std::uint64_t divergence_crossing(const SamplerSpec& spec, int d, double L,
                                  double threshold, std::uint64_t cap) {
  // The Poisson terms are hot (crossings land deep in the 10^8 range), so the
  // variant dispatch is hoisted out of the loop; the per-term arithmetic
  // matches divergence_term to the last bit.
  if (const auto* p = std::get_if<PoissonDirectionSpec>(&spec)) {
    const double c = std::pow(2.0, -(d - 1));
    if (p->schedule == PoissonSchedule::ApproachOne)
      return crossing_scan(
          [c](std::uint64_t i) {
            return c * (1.0 - (1.0 - 1.0 / static_cast<double>(i)));
          },
          threshold, cap);
    const double t = c * (1.0 - p->z0);
    return crossing_scan([t](std::uint64_t) { return t; }, threshold, cap);
  }
  return crossing_scan(
      [&](std::uint64_t i) { return divergence_term(spec, d, L, i); }, threshold,
      cap);
}

}  // namespace lab
