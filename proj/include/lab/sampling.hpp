#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "lab/rng.hpp"
#include "lab/smallmat.hpp"
#include "lab/vec.hpp"

namespace lab {

// Distribution families for the reflection-parameter sequence W1, W2, ...
// Direction-only families return parameters with r = 0; consumers that
// symmetrize along directions read just .u.

struct UniformPolarSpec {
  double L = 1.0;  // r uniform on (0, 2L], u uniform on the sphere
};

struct UniformDirectionSpec {};

enum class GaussianSchedule {
  Constant,       // t_i = t0
  LogLogInverse,  // t_i = 1 / log log i (i clamped below 3)
  PowerTwoOverD,  // t_i = t0 * i^(2/d)
};

// Radial density proportional to e^(-r^2/2t) r^(d-1): r = sqrt(t) times a
// chi-distributed draw, via a tabulated inverse CDF. Direction uniform.
struct GaussianPolarSpec {
  GaussianSchedule schedule = GaussianSchedule::Constant;
  double t0 = 1.0;
};

enum class PoissonSchedule {
  Constant,     // |z_i| = z0
  ApproachOne,  // |z_i| = 1 - 1/i
};

// Direction density proportional to (1-|z|^2)/|z-u|^d for the pole point
// z = |z_i| * pole, by rejection against the uniform sphere.
struct PoissonDirectionSpec {
  Direction pole;
  double z0 = 0.5;
  PoissonSchedule schedule = PoissonSchedule::Constant;
};

struct FiniteIIDSpec {
  std::vector<Direction> directions;
  double r_max = 1.0;  // r uniform on (0, r_max]
};

using SamplerSpec = std::variant<UniformPolarSpec, UniformDirectionSpec,
                                 GaussianPolarSpec, PoissonDirectionSpec,
                                 FiniteIIDSpec>;

// One draw of W_i (i is 1-based; only schedule-dependent families read it).
// Throws RejectionBudgetExceeded if the Poisson sampler uses 10^6 proposals
// without an accept.
PolarParam sample(const SamplerSpec& spec, int d, std::uint64_t i, Rng& rng);

// Feedback rule that defeats polarization convergence: odd emissions shrink
// the base radius to at most eps * 2^-n (so apex motion is summable), even
// emissions replay the base parameter, which then fixes the cone because the
// odd fold already moved the apex to its kept side.
class AdversarialConeDriver {
 public:
  AdversarialConeDriver(SamplerSpec base, int d, double eps, Rng rng);

  PolarParam next(const Point& apex);

  // Audit hooks: every drawn base parameter and the (1-based) position in the
  // emitted sequence where it reappears verbatim.
  const std::vector<PolarParam>& base_draws() const { return draws_; }
  const std::vector<std::uint64_t>& base_positions() const { return positions_; }

 private:
  SamplerSpec base_;
  int d_;
  double eps_;
  Rng rng_;
  std::uint64_t emitted_ = 0;
  std::uint64_t pair_ = 0;
  bool have_pending_ = false;
  std::vector<PolarParam> draws_;
  std::vector<std::uint64_t> positions_;
};

// Feedback rule that defeats Steiner convergence: starts at a maximizing
// eigenvector and walks toward each base direction in angular steps eps/n,
// so every step stays within eps/n of the current maximizing eigenvector and
// the eigenvalue gap can only shrink by the certified factors
// (1 - (C+2) sin^2(eps/n)). Requires (C+2) sin^2(eps) < 1 for the initial C.
class AdversarialSteinerDriver {
 public:
  AdversarialSteinerDriver(SamplerSpec base, int d, double eps, const Mat& m0,
                           Rng rng);

  Direction next(const Mat& current);

  const std::vector<Direction>& base_draws() const { return draws_; }
  const std::vector<std::uint64_t>& base_positions() const { return positions_; }

 private:
  SamplerSpec base_;
  int d_;
  double eps_;
  Rng rng_;
  std::uint64_t emitted_ = 0;
  std::uint64_t served_ = 0;
  bool have_target_ = false;
  Direction target_;
  std::vector<Direction> draws_;
  std::vector<std::uint64_t> positions_;
};

struct DivergenceAudit {
  std::vector<double> partial_sums;
  bool nonnegative_terms = true;
};

// Partial sums of the per-family divergence lower-bound terms:
// Gaussian t_i^(-d/2) e^(-2L^2/t_i), Poisson 2^-(d-1) (1-|z_i|).
// Throws UnsupportedSpec for other families.
DivergenceAudit divergence_audit(const SamplerSpec& spec, int d, double L,
                                 std::size_t n_terms);

// First index whose partial sum exceeds threshold, scanning at most cap
// terms; returns 0 if the threshold is not reached by then.
std::uint64_t divergence_crossing(const SamplerSpec& spec, int d, double L,
                                  double threshold, std::uint64_t cap);

}  // namespace lab
