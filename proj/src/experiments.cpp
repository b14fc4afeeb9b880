#include "lab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "lab/cone.hpp"
#include "lab/csv.hpp"
#include "lab/ellipsoid.hpp"
#include "lab/errors.hpp"
#include "lab/geometry.hpp"
#include "lab/grid.hpp"
#include "lab/metrics.hpp"
#include "lab/orbits.hpp"
#include "lab/polarize.hpp"
#include "lab/rearrange.hpp"
#include "lab/rng.hpp"
#include "lab/sampling.hpp"
#include "lab/smallmat.hpp"
#include "lab/steiner.hpp"
#include "lab/svg.hpp"

namespace lab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json merge_into(json base, const json& over) {
  if (!base.is_object() || !over.is_object()) return over;
  for (auto it = over.begin(); it != over.end(); ++it) {
    auto b = base.find(it.key());
    if (b != base.end())
      *b = merge_into(*b, it.value());
    else
      base[it.key()] = it.value();
  }
  return base;
}

struct Ctx {
  json cfg;
  std::string out;
  std::uint64_t seed = 1;
  int threads = 1;
};

std::string path_in(const Ctx& ctx, const std::string& name) {
  return (fs::path(ctx.out) / name).string();
}

// Embedded pass/fail checks; the summary carries one line per check.
struct Checks {
  bool all = true;
  std::string lines;

  void add(bool ok, const std::string& what) {
    all = all && ok;
    lines += ok ? "  [ok] " : "  [FAIL] ";
    lines += what;
    lines += '\n';
  }
  void note(const std::string& what) { lines += "  " + what + "\n"; }
};

Vec vec_from(const json& a, int d) {
  if (!a.is_array() || static_cast<int>(a.size()) != d)
    throw ConfigError("expected an array of " + std::to_string(d) + " numbers");
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = a[static_cast<std::size_t>(i)].get<double>();
  return x;
}

SamplerSpec sampler_from(const json& j, int d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform-polar") {
    UniformPolarSpec s;
    s.L = j.value("L", 1.0);
    return s;
  }
  if (kind == "uniform-direction") return UniformDirectionSpec{};
  if (kind == "gaussian-polar") {
    GaussianPolarSpec s;
    s.t0 = j.value("t0", 1.0);
    const std::string sch = j.value("schedule", "constant");
    if (sch == "constant")
      s.schedule = GaussianSchedule::Constant;
    else if (sch == "loglog-inverse")
      s.schedule = GaussianSchedule::LogLogInverse;
    else if (sch == "power-two-over-d")
      s.schedule = GaussianSchedule::PowerTwoOverD;
    else
      throw ConfigError("unknown gaussian schedule: " + sch);
    return s;
  }
  if (kind == "poisson-direction") {
    PoissonDirectionSpec s;
    s.pole = Direction(vec_from(j.at("pole"), d));
    s.z0 = j.value("z0", 0.5);
    const std::string sch = j.value("schedule", "constant");
    if (sch == "constant")
      s.schedule = PoissonSchedule::Constant;
    else if (sch == "approach-one")
      s.schedule = PoissonSchedule::ApproachOne;
    else
      throw ConfigError("unknown poisson schedule: " + sch);
    return s;
  }
  if (kind == "finite-iid") {
    FiniteIIDSpec s;
    std::vector<Direction> dirs;
    for (const json& a : j.at("directions")) dirs.push_back(Direction(vec_from(a, d)));
    s.directions = make_direction_set(std::move(dirs));
    s.r_max = j.value("r_max", 1.0);
    return s;
  }
  throw ConfigError("unknown sampler kind: " + kind);
}

// Steps at which observables are recorded; always starts at 0 and ends at
// n_max. "all" records every step, "geometric" about ten points per decade.
std::vector<std::uint64_t> recorded_steps(std::uint64_t n_max, const std::string& mode) {
  std::vector<std::uint64_t> r{0};
  if (n_max == 0) return r;
  if (mode == "all") {
    for (std::uint64_t n = 1; n <= n_max; ++n) r.push_back(n);
    return r;
  }
  if (mode != "geometric") throw ConfigError("record must be \"all\" or \"geometric\"");
  for (std::uint64_t n = 1; n < 10 && n <= n_max; ++n) r.push_back(n);
  for (std::uint64_t dec = 10; dec <= n_max;) {
    for (std::uint64_t k = 1; k <= 9 && dec <= n_max / k; ++k) r.push_back(dec * k);
    if (dec > n_max / 10) break;  // keep dec*10 from wrapping
    dec *= 10;
  }
  if (r.back() != n_max) r.push_back(n_max);
  return r;
}

// [trial][recorded step][observable]
using Table = std::vector<std::vector<std::vector<double>>>;

// Runs `work` over trial indices on a small pool. Results land in
// trial-indexed slots, so scheduling cannot affect any output.
void for_each_trial(int threads, std::size_t trials,
                    const std::function<void(std::size_t)>& work,
                    std::vector<std::string>& errors) {
  errors.assign(trials, {});
  auto safe = [&](std::size_t t) {
    try {
      work(t);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  };
  int nw = std::max(1, std::min(threads, static_cast<int>(trials)));
  if (nw == 1) {
    for (std::size_t t = 0; t < trials; ++t) safe(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t t = next.fetch_add(1);
        if (t >= trials) return;
        safe(t);
      }
    });
  for (auto& th : pool) th.join();
}

// True when all trials finished; otherwise logs per-trial errors and fails.
bool require_clean(const std::vector<std::string>& errors, const Ctx& ctx, Checks& ck) {
  std::size_t bad = 0;
  for (const auto& e : errors)
    if (!e.empty()) ++bad;
  if (bad) {
    std::ofstream log(path_in(ctx, "errors.log"), std::ios::binary);
    for (std::size_t t = 0; t < errors.size(); ++t)
      if (!errors[t].empty()) log << "trial " << t << ": " << errors[t] << "\n";
  }
  ck.add(bad == 0, "all " + std::to_string(errors.size()) + " trials completed" +
                       (bad ? " (" + std::to_string(bad) + " failed, see errors.log)" : ""));
  return bad == 0;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se_at(const Table& rows, std::size_t k, std::size_t obs) {
  MeanSe r;
  const std::size_t t_count = rows.size();
  for (std::size_t t = 0; t < t_count; ++t) r.mean += rows[t][k][obs];
  r.mean /= static_cast<double>(t_count);
  if (t_count > 1) {
    double v = 0.0;
    for (std::size_t t = 0; t < t_count; ++t) {
      double dx = rows[t][k][obs] - r.mean;
      v += dx * dx;
    }
    r.se = std::sqrt(v / static_cast<double>(t_count - 1) / static_cast<double>(t_count));
  }
  return r;
}

void write_rows_csv(const Ctx& ctx, const std::vector<std::string>& obs_names,
                    const std::vector<std::uint64_t>& steps, const Table& rows) {
  std::vector<std::string> header{"trial", "n"};
  header.insert(header.end(), obs_names.begin(), obs_names.end());
  CsvWriter csv(path_in(ctx, "rows.csv"), header);
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t k = 0; k < steps.size(); ++k)
      csv.row(static_cast<long long>(t), static_cast<long long>(steps[k]), rows[t][k]);
}

// Largest increase between consecutive recorded values, over all trials;
// 0 or negative means the audited quantity never rose.
double max_increment(const Table& rows, std::size_t obs) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& trial : rows)
    for (std::size_t k = 1; k < trial.size(); ++k)
      worst = std::max(worst, trial[k][obs] - trial[k - 1][obs]);
  return worst;
}

void audit_monotone(Checks& ck, const Table& rows, std::size_t obs,
                    const std::string& label, double slack) {
  double inc = max_increment(rows, obs);
  ck.add(inc <= slack, label + " nonincreasing within " + fmt_g17(slack) +
                           " (max increment " + fmt_g17(inc) + ")");
}

std::string fmt_u(std::uint64_t n) { return std::to_string(n); }

// ---------------------------------------------------------------------------
// conv-polar: random polarizations drive a cone to its rearrangement.

ExpResult run_conv_polar(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const Lattice lat{d, c.at("n_cells").get<int>(), c.at("L").get<double>()};
  const double h = lat.h();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, c.value("record", "geometric"));

  const GridFunction f0 =
      cone_to_grid(lat, vec_from(c.at("apex"), d), c.at("height").get<double>());
  const GridFunction fstar = sdr_grid(f0);
  const double mass = l1_distance(f0, GridFunction(lat));

  Table rows(trials);
  std::vector<std::string> errors;
  GridFunction checkpoint;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        GridFunction f = f0;
        auto& out = rows[t];
        out.reserve(steps.size());
        std::size_t si = 0;
        auto rec = [&](std::uint64_t n) {
          if (si < steps.size() && steps[si] == n) {
            out.push_back({sup_distance(f, fstar), l1_distance(f, fstar), radial_moment(f)});
            ++si;
          }
        };
        rec(0);
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          f = polarize_grid(f, sample(spec, d, i, rng), PolarizeMode::Interp);
          rec(i);
        }
        if (t == 0) checkpoint = f;
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"sup_distance", "l1_distance", "radial_moment"}, steps, rows);
  save_grid(checkpoint, path_in(ctx, "checkpoint.grid"));

  CsvWriter means(path_in(ctx, "means.csv"),
                  {"n", "sup_mean", "sup_se", "l1_mean", "moment_mean"});
  ChartSeries sup_s{"sup distance", {}, {}}, l1_s{"L1 distance", {}, {}};
  double final_sup = 0.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe sup = mean_se_at(rows, k, 0), l1 = mean_se_at(rows, k, 1),
           mom = mean_se_at(rows, k, 2);
    means.row({static_cast<double>(steps[k]), sup.mean, sup.se, l1.mean, mom.mean});
    if (steps[k] > 0) {
      sup_s.x.push_back(static_cast<double>(steps[k]));
      sup_s.y.push_back(sup.mean);
      l1_s.x.push_back(static_cast<double>(steps[k]));
      l1_s.y.push_back(l1.mean);
    }
    final_sup = sup.mean;
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"random polarizations of a cone", "step n", "distance to f*", true, true},
                   {sup_s, l1_s});

  const double target = c.value("final_sup", 0.05);
  ck.add(final_sup < target, "mean sup distance at n=" + fmt_u(n_max) + " is " +
                                 fmt_g17(final_sup) + " < " + fmt_g17(target));
  audit_monotone(ck, rows, 0, "sup distance", c.value("audit_slack_sup", 4.0 * h));
  audit_monotone(ck, rows, 2, "radial moment", c.value("audit_slack_moment", 4.0 * h * mass));
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// rate-uniform: expected-error decay under uniformly sampled reflections.
// Variant "set-square" tracks the symmetric difference of an offset square;
// variant "holder-cone" tracks the sup error of a Lipschitz cone.

ExpResult run_rate_set_square(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const Lattice lat{d, c.at("n_cells").get<int>(), c.at("L").get<double>()};
  const double h = lat.h();
  const double big_l = c.at("L").get<double>();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, c.value("record", "all"));

  const double side = std::sqrt(c.at("square_area").get<double>());
  const Vec ctr = vec_from(c.at("square_center"), d);
  const double per = c.value("perimeter", 4.0 * side);

  GridSet a0(lat);
  {
    const std::size_t total = lat.cell_count();
    for (std::size_t i = 0; i < total; ++i) {
      const Point x = lat.center_flat(i);
      bool in = true;
      for (int k = 0; k < d; ++k) in = in && std::fabs(x[k] - ctr[k]) <= 0.5 * side;
      a0.m[i] = in ? 1 : 0;
    }
  }
  const GridSet astar = sdr_set(a0);

  Table rows(trials);
  std::vector<std::string> errors;
  GridSet checkpoint;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        GridSet a = a0;
        auto& out = rows[t];
        out.reserve(steps.size());
        std::size_t si = 0;
        auto rec = [&](std::uint64_t n) {
          if (si < steps.size() && steps[si] == n) {
            out.push_back({symm_diff_volume(a, astar), radial_moment(indicator(a))});
            ++si;
          }
        };
        rec(0);
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          a = polarize_set(a, sample(spec, d, i, rng), PolarizeMode::Interp);
          rec(i);
        }
        if (t == 0) checkpoint = a;
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"symm_diff", "radial_moment"}, steps, rows);
  save_set(checkpoint, path_in(ctx, "checkpoint.set"));

  // E m(A_n ^ A*) <= 2d m(B_2L) / (n + d 2^(d+1)), plus a perimeter-scaled
  // discretization allowance.
  const double numer = 2.0 * d * ball_volume(d, 2.0 * big_l);
  const double shift = d * std::pow(2.0, d + 1);
  const double slack = c.value("bound_slack", 5.0) * h * per;
  auto bound = [&](std::uint64_t n) { return numer / (static_cast<double>(n) + shift) + slack; };

  CsvWriter means(path_in(ctx, "means.csv"), {"n", "symmdiff_mean", "symmdiff_se", "bound"});
  ChartSeries mean_s{"mean symm diff", {}, {}}, bound_s{"bound", {}, {}};
  bool under = true;
  std::uint64_t first_over = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe m = mean_se_at(rows, k, 0);
    means.row({static_cast<double>(steps[k]), m.mean, m.se, bound(steps[k])});
    if (steps[k] > 0) {
      mean_s.x.push_back(static_cast<double>(steps[k]));
      mean_s.y.push_back(m.mean);
      bound_s.x.push_back(static_cast<double>(steps[k]));
      bound_s.y.push_back(bound(steps[k]));
      if (m.mean > bound(steps[k]) && !first_over) {
        under = false;
        first_over = steps[k];
      }
    }
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"symmetric-difference decay, offset square", "step n", "volume", true, true},
                   {mean_s, bound_s});

  ck.add(under, under ? "mean symm diff under the 1/n bound at every recorded n"
                      : "mean symm diff exceeds the bound first at n=" + fmt_u(first_over));
  audit_monotone(ck, rows, 0, "symm diff", c.value("audit_slack_symmdiff", 2.0 * h * per));
  audit_monotone(ck, rows, 1, "radial moment",
                 c.value("audit_slack_moment", 4.0 * h * per * big_l));
  return {ck.all, "", ck.lines, ctx.out};
}

ExpResult run_rate_holder_cone(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const Lattice lat{d, c.at("n_cells").get<int>(), c.at("L").get<double>()};
  const double h = lat.h();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, c.value("record", "all"));

  const GridFunction f0 =
      cone_to_grid(lat, vec_from(c.at("apex"), d), c.at("height").get<double>());
  const GridFunction fstar = sdr_grid(f0);
  const double mass = l1_distance(f0, GridFunction(lat));

  Table rows(trials);
  std::vector<std::string> errors;
  GridFunction checkpoint;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        GridFunction f = f0;
        auto& out = rows[t];
        out.reserve(steps.size());
        std::size_t si = 0;
        auto rec = [&](std::uint64_t n) {
          if (si < steps.size() && steps[si] == n) {
            out.push_back({sup_distance(f, fstar), radial_moment(f)});
            ++si;
          }
        };
        rec(0);
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          f = polarize_grid(f, sample(spec, d, i, rng), PolarizeMode::Interp);
          rec(i);
        }
        if (t == 0) checkpoint = f;
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"sup_distance", "radial_moment"}, steps, rows);
  save_grid(checkpoint, path_in(ctx, "checkpoint.grid"));

  // E sup error <= rate_constant * n^(-alpha/(d+alpha)) with alpha = 1, plus
  // an O(h) interpolation allowance; checked at the configured steps.
  const double rate_c = c.value("rate_constant", 10.0);
  const double expo = -1.0 / (d + 1.0);
  const double allow = c.value("rate_allowance", 4.0 * h);
  auto bound = [&](std::uint64_t n) { return rate_c * std::pow(static_cast<double>(n), expo) + allow; };

  std::vector<std::uint64_t> check_at;
  for (const json& v : c.at("check_steps")) check_at.push_back(v.get<std::uint64_t>());

  CsvWriter means(path_in(ctx, "means.csv"), {"n", "sup_mean", "sup_se", "bound"});
  ChartSeries mean_s{"mean sup error", {}, {}}, bound_s{"bound", {}, {}};
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe m = mean_se_at(rows, k, 0);
    means.row({static_cast<double>(steps[k]), m.mean, m.se, bound(steps[k])});
    if (steps[k] > 0) {
      mean_s.x.push_back(static_cast<double>(steps[k]));
      mean_s.y.push_back(m.mean);
      bound_s.x.push_back(static_cast<double>(steps[k]));
      bound_s.y.push_back(bound(steps[k]));
    }
    for (std::uint64_t want : check_at)
      if (steps[k] == want)
        ck.add(m.mean <= bound(want), "mean sup error at n=" + fmt_u(want) + " is " +
                                          fmt_g17(m.mean) + " <= " + fmt_g17(bound(want)));
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"sup-error decay, Lipschitz cone", "step n", "sup error", true, true},
                   {mean_s, bound_s});

  audit_monotone(ck, rows, 0, "sup distance", c.value("audit_slack_sup", 4.0 * h));
  audit_monotone(ck, rows, 1, "radial moment", c.value("audit_slack_moment", 4.0 * h * mass));
  return {ck.all, "", ck.lines, ctx.out};
}

ExpResult run_rate_uniform(const Ctx& ctx) {
  const std::string variant = ctx.cfg.at("variant").get<std::string>();
  if (variant == "set-square") return run_rate_set_square(ctx);
  if (variant == "holder-cone") return run_rate_holder_cone(ctx);
  throw ConfigError("rate-uniform variant must be \"set-square\" or \"holder-cone\"");
}

// ---------------------------------------------------------------------------
// recursion-audit: the normalized expected symmetric difference obeys
// z_n <= z_(n-1) (1 - z_(n-1)) up to Monte Carlo and grid error.

ExpResult run_recursion_audit(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const Lattice lat{d, c.at("n_cells").get<int>(), c.at("L").get<double>()};
  const double h = lat.h();
  const double big_l = c.at("L").get<double>();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, "all");

  const double side = std::sqrt(c.at("square_area").get<double>());
  const Vec ctr = vec_from(c.at("square_center"), d);
  const double per = c.value("perimeter", 4.0 * side);

  GridSet a0(lat);
  for (std::size_t i = 0; i < lat.cell_count(); ++i) {
    const Point x = lat.center_flat(i);
    bool in = true;
    for (int k = 0; k < d; ++k) in = in && std::fabs(x[k] - ctr[k]) <= 0.5 * side;
    a0.m[i] = in ? 1 : 0;
  }
  const GridSet astar = sdr_set(a0);

  Table rows(trials);
  std::vector<std::string> errors;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        GridSet a = a0;
        auto& out = rows[t];
        out.reserve(steps.size());
        out.push_back({symm_diff_volume(a, astar)});
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          a = polarize_set(a, sample(spec, d, i, rng), PolarizeMode::Interp);
          out.push_back({symm_diff_volume(a, astar)});
        }
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"symm_diff"}, steps, rows);

  const double denom = 2.0 * d * ball_volume(d, 2.0 * big_l);
  const double slack = c.value("recursion_slack", 2.0 * h * per) / denom;

  CsvWriter means(path_in(ctx, "means.csv"), {"n", "z_mean", "z_se", "recursion_rhs"});
  ChartSeries z_s{"z_n", {}, {}}, rhs_s{"recursion bound", {}, {}};
  bool ok = true;
  std::uint64_t first_bad = 0;
  double prev_z = 0.0;
  double worst_excess = -1.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe m = mean_se_at(rows, k, 0);
    const double z = m.mean / denom, se = m.se / denom;
    double rhs = prev_z * (1.0 - prev_z) + 3.0 * se + slack;
    means.row({static_cast<double>(steps[k]), z, se, k ? rhs : z});
    if (k) {
      if (z - rhs > worst_excess) worst_excess = z - rhs;
      if (z > rhs && !first_bad) {
        ok = false;
        first_bad = steps[k];
      }
      z_s.x.push_back(static_cast<double>(steps[k]));
      z_s.y.push_back(z);
      rhs_s.x.push_back(static_cast<double>(steps[k]));
      rhs_s.y.push_back(rhs);
    }
    prev_z = z;
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"one-step recursion audit", "step n", "normalized symm diff", true, true},
                   {z_s, rhs_s});
  ck.add(ok, ok ? "z_n <= z_(n-1)(1-z_(n-1)) + 3se + slack at every n (worst margin " +
                      fmt_g17(-worst_excess) + ")"
                : "recursion bound first violated at n=" + fmt_u(first_bad));
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// lower-cone: expected distance of a polarized cone to its rearrangement
// stays above dist0 * 2^-n.

ExpResult run_lower_cone(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, "all");

  const ConeFunction f0{vec_from(c.at("apex"), d)};
  const double dist0 = cone_sup_distance(f0, sdr_cone(f0));

  Table rows(trials);
  std::vector<std::string> errors;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        ConeFunction f = f0;
        auto& out = rows[t];
        out.reserve(steps.size());
        out.push_back({f.apex.norm()});
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          f = polarize_cone(f, sample(spec, d, i, rng));
          out.push_back({f.apex.norm()});
        }
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"apex_norm"}, steps, rows);

  CsvWriter means(path_in(ctx, "means.csv"), {"n", "apex_mean", "apex_se", "lower_bound"});
  ChartSeries mean_s{"mean apex norm", {}, {}}, bound_s{"2^-n lower bound", {}, {}};
  bool above = true;
  std::uint64_t first_bad = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe m = mean_se_at(rows, k, 0);
    const double bound = dist0 * std::pow(0.5, static_cast<double>(steps[k]));
    means.row({static_cast<double>(steps[k]), m.mean, m.se, bound});
    if (steps[k] > 0) {
      if (m.mean < bound - 3.0 * m.se && !first_bad) {
        above = false;
        first_bad = steps[k];
      }
      mean_s.x.push_back(static_cast<double>(steps[k]));
      mean_s.y.push_back(m.mean);
      bound_s.x.push_back(static_cast<double>(steps[k]));
      bound_s.y.push_back(bound);
    }
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"apex survival under random polarization", "step n", "mean apex norm",
                    false, true},
                   {mean_s, bound_s});

  ck.add(above, above ? "mean apex norm >= dist0 * 2^-n - 3se at every n <= " + fmt_u(n_max)
                      : "lower bound first violated at n=" + fmt_u(first_bad));
  audit_monotone(ck, rows, 0, "apex norm", c.value("audit_slack", 1e-12));
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// lower-ellipsoid: the certified sup-distance lower member gap/(2 lmax)
// decays no faster than 3^-n in expectation.

ExpResult run_lower_ellipsoid(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, "all");

  const Mat m0 = Mat::diag(vec_from(c.at("m0_diag"), d));
  const EllipsoidFunction e0 = make_ellipsoid(m0);
  const double dist0 = ellipsoid_sup_to_sdr(e0);
  const double det0 = det(m0);

  Table rows(trials);
  std::vector<std::string> errors;
  std::vector<double> final_det(trials, 0.0);
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        Mat m = m0;
        auto& out = rows[t];
        out.reserve(steps.size());
        GapInfo g = eigen_gap(m);
        out.push_back({g.gap / (2.0 * g.lmax), g.lmax, g.lmin});
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          m = steiner_ellipsoid(m, sample(spec, d, i, rng).u);
          g = eigen_gap(m);
          out.push_back({g.gap / (2.0 * g.lmax), g.lmax, g.lmin});
        }
        final_det[t] = det(m);
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"lower_member", "lmax", "lmin"}, steps, rows);

  CsvWriter means(path_in(ctx, "means.csv"),
                  {"n", "lower_member_mean", "lower_member_se", "lower_bound"});
  ChartSeries mean_s{"mean lower member", {}, {}}, bound_s{"3^-n lower bound", {}, {}};
  bool above = true;
  std::uint64_t first_bad = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe m = mean_se_at(rows, k, 0);
    const double bound = 0.25 * dist0 * std::pow(3.0, -static_cast<double>(steps[k]));
    means.row({static_cast<double>(steps[k]), m.mean, m.se, bound});
    if (steps[k] > 0) {
      if (m.mean < bound - 3.0 * m.se && !first_bad) {
        above = false;
        first_bad = steps[k];
      }
      mean_s.x.push_back(static_cast<double>(steps[k]));
      mean_s.y.push_back(m.mean);
      bound_s.x.push_back(static_cast<double>(steps[k]));
      bound_s.y.push_back(bound);
    }
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"eigenvalue-gap survival under random flattening", "step n",
                    "gap / (2 lmax)", false, true},
                   {mean_s, bound_s});

  ck.add(above,
         above ? "mean lower member >= dist0/4 * 3^-n - 3se at every n <= " + fmt_u(n_max)
               : "lower bound first violated at n=" + fmt_u(first_bad));
  audit_monotone(ck, rows, 1, "largest eigenvalue", 1e-12);
  double worst_det = 0.0;
  for (double v : final_det) worst_det = std::max(worst_det, std::fabs(v - det0));
  ck.add(worst_det <= 1e-9,
         "determinant preserved through all steps (worst drift " + fmt_g17(worst_det) + ")");
  // lmin is nondecreasing; reuse the monotone audit on its negation.
  double worst_drop = 0.0;
  for (const auto& trial : rows)
    for (std::size_t k = 1; k < trial.size(); ++k)
      worst_drop = std::max(worst_drop, trial[k - 1][2] - trial[k][2]);
  ck.add(worst_drop <= 1e-12,
         "smallest eigenvalue nondecreasing (worst drop " + fmt_g17(worst_drop) + ")");
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// nonconv-cone: a feedback-chosen parameter sequence pins the cone apex away
// from the origin forever, while containing an i.i.d. sequence.

ExpResult run_nonconv_cone(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const SamplerSpec base = sampler_from(c.at("sampler"), d);
  const double eps = c.at("eps").get<double>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, c.value("record", "geometric"));

  ConeFunction f{vec_from(c.at("apex"), d)};
  const double floor_norm = f.apex.norm() - eps;

  AdversarialConeDriver drv(base, d, eps, Rng(ctx.seed, 0, 1));
  std::vector<PolarParam> emitted;
  emitted.reserve(n_max);

  CsvWriter csv(path_in(ctx, "rows.csv"), {"n", "apex_norm", "r"});
  double min_norm = f.apex.norm();
  ChartSeries norm_s{"apex norm", {}, {}};
  std::size_t si = 0;
  auto rec = [&](std::uint64_t n, double r) {
    if (si < steps.size() && steps[si] == n) {
      csv.row({static_cast<double>(n), f.apex.norm(), r});
      norm_s.x.push_back(static_cast<double>(n));
      norm_s.y.push_back(f.apex.norm());
      ++si;
    }
  };
  csv.row({0.0, f.apex.norm(), 0.0});
  ++si;  // steps[0] == 0 carries no parameter
  for (std::uint64_t i = 1; i <= n_max; ++i) {
    PolarParam w = drv.next(f.apex);
    emitted.push_back(w);
    f = polarize_cone(f, w);
    min_norm = std::min(min_norm, f.apex.norm());
    rec(i, w.r);
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"apex norm under the defeating sequence", "step n", "apex norm", true, false},
                   {norm_s});

  Checks ck;
  ck.add(min_norm >= floor_norm - 1e-12,
         "apex norm stayed >= |a0| - eps = " + fmt_g17(floor_norm) + " (min " +
             fmt_g17(min_norm) + ") over " + fmt_u(n_max) + " steps");

  const auto& draws = drv.base_draws();
  const auto& pos = drv.base_positions();
  bool sub = !draws.empty() && pos.size() <= draws.size() && draws.size() <= pos.size() + 1;
  for (std::size_t k = 0; k < pos.size() && sub; ++k) {
    sub = pos[k] >= 1 && pos[k] <= emitted.size() && (k == 0 || pos[k] > pos[k - 1]);
    if (!sub) break;
    const PolarParam& a = emitted[pos[k] - 1];
    const PolarParam& b = draws[k];
    sub = a.r == b.r;
    for (int j = 0; j < d && sub; ++j) sub = a.u[j] == b.u[j];
  }
  ck.add(sub, "every base draw reappears verbatim at its recorded position (" +
                  std::to_string(pos.size()) + " of " + std::to_string(draws.size()) +
                  " draws replayed)");
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// nonconv-steiner: a feedback-chosen direction sequence keeps the ellipsoid
// eigenvalue gap above a certified product floor.

ExpResult run_nonconv_steiner(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const SamplerSpec base = sampler_from(c.at("sampler"), d);
  const double eps = c.at("eps").get<double>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, c.value("record", "geometric"));

  Mat m = Mat::diag(vec_from(c.at("m0_diag"), d));
  make_ellipsoid(m);
  GapInfo g0 = eigen_gap(m);
  const double c_plus_2 = 1.0 + g0.lmax / g0.lmin + 2.0;

  AdversarialSteinerDriver drv(base, d, eps, m, Rng(ctx.seed, 0, 1));
  std::vector<Direction> emitted;
  emitted.reserve(n_max);

  CsvWriter csv(path_in(ctx, "rows.csv"), {"n", "gap", "floor"});
  ChartSeries gap_s{"eigen gap", {}, {}}, floor_s{"certified floor", {}, {}};
  csv.row({0.0, g0.gap, g0.gap});
  double product = 1.0;
  bool above = true;
  std::uint64_t first_bad = 0;
  std::size_t si = 1;
  double final_gap = g0.gap, final_floor = g0.gap;
  for (std::uint64_t i = 1; i <= n_max; ++i) {
    Direction u = drv.next(m);
    emitted.push_back(u);
    m = steiner_ellipsoid(m, u);
    const double s = std::sin(eps / static_cast<double>(i));
    product *= 1.0 - c_plus_2 * s * s;
    const double gap = eigen_gap(m).gap;
    const double floor_i = g0.gap * product - 1e-9;
    if (gap < floor_i && !first_bad) {
      above = false;
      first_bad = i;
    }
    if (si < steps.size() && steps[si] == i) {
      csv.row({static_cast<double>(i), gap, floor_i});
      gap_s.x.push_back(static_cast<double>(i));
      gap_s.y.push_back(gap);
      floor_s.x.push_back(static_cast<double>(i));
      floor_s.y.push_back(floor_i);
      ++si;
    }
    final_gap = gap;
    final_floor = floor_i;
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"eigenvalue gap under the defeating sequence", "step n", "gap", true, false},
                   {gap_s, floor_s});

  Checks ck;
  ck.add(above, above ? "gap stayed >= gap0 * prod(1-(C+2)sin^2(eps/k)) - 1e-9; final gap " +
                            fmt_g17(final_gap) + " vs floor " + fmt_g17(final_floor)
                      : "gap fell below the certified floor first at n=" + fmt_u(first_bad));

  const auto& draws = drv.base_draws();
  const auto& pos = drv.base_positions();
  bool sub = !draws.empty() && pos.size() <= draws.size() && draws.size() <= pos.size() + 1;
  for (std::size_t k = 0; k < pos.size() && sub; ++k) {
    sub = pos[k] >= 1 && pos[k] <= emitted.size() && (k == 0 || pos[k] > pos[k - 1]);
    if (!sub) break;
    for (int j = 0; j < d && sub; ++j) sub = emitted[pos[k] - 1][j] == draws[k][j];
  }
  ck.add(sub, "every base direction reappears verbatim at its recorded position (" +
                  std::to_string(pos.size()) + " of " + std::to_string(draws.size()) +
                  " draws replayed)");
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// steiner-rate: sup distance of an ellipsoid to the unit ball under uniform
// random flattening directions; exact per trial, monotone by construction.

ExpResult run_steiner_rate(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, "all");

  const Mat m0 = Mat::diag(vec_from(c.at("m0_diag"), d));
  make_ellipsoid(m0);  // validation only

  Table rows(trials);
  std::vector<std::string> errors;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        Mat m = m0;
        auto& out = rows[t];
        out.reserve(steps.size());
        out.push_back({ellipsoid_sup_to_sdr(EllipsoidFunction{m})});
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          m = steiner_ellipsoid(m, sample(spec, d, i, rng).u);
          out.push_back({ellipsoid_sup_to_sdr(EllipsoidFunction{m})});
        }
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"sup_distance"}, steps, rows);

  const double rate_c = c.value("rate_constant", 40.0);
  const double expo = -1.0 / (d + 1.0);
  CsvWriter means(path_in(ctx, "means.csv"), {"n", "sup_mean", "sup_se", "bound"});
  ChartSeries mean_s{"mean sup distance", {}, {}}, bound_s{"rate bound", {}, {}};
  bool under = true;
  std::uint64_t first_over = 0;
  double final_mean = 0.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe m = mean_se_at(rows, k, 0);
    const double bound = rate_c * std::pow(std::max<double>(1, steps[k]), expo);
    means.row({static_cast<double>(steps[k]), m.mean, m.se, bound});
    if (steps[k] > 0) {
      if (m.mean > bound + 3.0 * m.se && !first_over) {
        under = false;
        first_over = steps[k];
      }
      mean_s.x.push_back(static_cast<double>(steps[k]));
      mean_s.y.push_back(m.mean);
      bound_s.x.push_back(static_cast<double>(steps[k]));
      bound_s.y.push_back(bound);
    }
    final_mean = m.mean;
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"sup-error decay under random flattening", "step n", "sup distance",
                    true, true},
                   {mean_s, bound_s});

  ck.add(under, under ? "mean sup distance under the n^(-1/(d+1)) rate bound at every n"
                      : "rate bound first exceeded at n=" + fmt_u(first_over));
  const double target = c.value("final_sup", 0.02);
  ck.add(final_mean < target, "mean sup distance at n=" + fmt_u(n_max) + " is " +
                                  fmt_g17(final_mean) + " < " + fmt_g17(target));
  // The sup distance passes through the eigensolver (tol 1e-12), so once the
  // form is numerically round consecutive values jitter at that scale; the
  // slack must sit above it.
  audit_monotone(ck, rows, 0, "sup distance", c.value("audit_slack", 1e-9));
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// compact-hausdorff: Hausdorff convergence of a notched annulus (set and
// boundary) to the centered disk.

ExpResult run_compact_hausdorff(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const Lattice lat{d, c.at("n_cells").get<int>(), c.at("L").get<double>()};
  const double h = lat.h();
  const SamplerSpec spec = sampler_from(c.at("sampler"), d);
  const std::size_t trials = c.at("trials").get<std::size_t>();
  const std::uint64_t n_max = c.at("n_max").get<std::uint64_t>();
  const auto steps = recorded_steps(n_max, c.value("record", "geometric"));

  const double r_in = c.at("r_inner").get<double>();
  const double r_out = c.at("r_outer").get<double>();
  const double notch = c.at("notch_half").get<double>();
  const double per = c.value(
      "perimeter", (2.0 * std::numbers::pi - 2.0 * notch) * (r_in + r_out) + 2.0 * (r_out - r_in));

  GridSet k0(lat);
  for (std::size_t i = 0; i < lat.cell_count(); ++i) {
    const Point x = lat.center_flat(i);
    const double rr = x.norm();
    const bool in_notch = std::fabs(std::atan2(x[1], x[0])) < notch;
    k0.m[i] = (rr >= r_in && rr <= r_out && !in_notch) ? 1 : 0;
  }
  const GridSet kstar = sdr_set(k0);
  const GridSet kstar_bdy = boundary_cells(kstar);

  Table rows(trials);
  std::vector<std::string> errors;
  GridSet checkpoint;
  for_each_trial(
      ctx.threads, trials,
      [&](std::size_t t) {
        Rng rng(ctx.seed, t);
        GridSet k = k0;
        auto& out = rows[t];
        out.reserve(steps.size());
        std::size_t si = 0;
        auto rec = [&](std::uint64_t n) {
          if (si < steps.size() && steps[si] == n) {
            out.push_back({hausdorff(k, kstar), hausdorff(boundary_cells(k), kstar_bdy),
                           symm_diff_volume(k, kstar), radial_moment(indicator(k))});
            ++si;
          }
        };
        rec(0);
        for (std::uint64_t i = 1; i <= n_max; ++i) {
          k = polarize_set(k, sample(spec, d, i, rng), PolarizeMode::Interp);
          rec(i);
        }
        if (t == 0) checkpoint = k;
      },
      errors);

  Checks ck;
  if (!require_clean(errors, ctx, ck)) return {false, "", ck.lines, ctx.out};

  write_rows_csv(ctx, {"hausdorff", "boundary_hausdorff", "symm_diff", "radial_moment"},
                 steps, rows);
  save_set(checkpoint, path_in(ctx, "checkpoint.set"));

  const double target = c.value("hausdorff_cells", 4.0) * h;
  double worst_final_h = 0.0, worst_final_b = 0.0;
  std::uint64_t reached = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    double worst_h = 0.0, worst_b = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      worst_h = std::max(worst_h, rows[t][k][0]);
      worst_b = std::max(worst_b, rows[t][k][1]);
    }
    if (!reached && worst_h < target && worst_b < target) reached = std::max<std::uint64_t>(steps[k], 1);
    if (k + 1 == steps.size()) {
      worst_final_h = worst_h;
      worst_final_b = worst_b;
    }
  }

  CsvWriter means(path_in(ctx, "means.csv"),
                  {"n", "hausdorff_mean", "boundary_hausdorff_mean", "symmdiff_mean", "target"});
  ChartSeries h_s{"set Hausdorff", {}, {}}, b_s{"boundary Hausdorff", {}, {}};
  for (std::size_t k = 0; k < steps.size(); ++k) {
    MeanSe mh = mean_se_at(rows, k, 0), mb = mean_se_at(rows, k, 1), ms = mean_se_at(rows, k, 2);
    means.row({static_cast<double>(steps[k]), mh.mean, mb.mean, ms.mean, target});
    if (steps[k] > 0) {
      h_s.x.push_back(static_cast<double>(steps[k]));
      h_s.y.push_back(mh.mean);
      b_s.x.push_back(static_cast<double>(steps[k]));
      b_s.y.push_back(mb.mean);
    }
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"Hausdorff convergence of a notched annulus", "step n", "distance",
                    true, true},
                   {h_s, b_s});

  ck.add(worst_final_h < target, "set Hausdorff distance at n=" + fmt_u(n_max) + " is " +
                                     fmt_g17(worst_final_h) + " < " + fmt_g17(target) +
                                     " in every trial");
  ck.add(worst_final_b < target, "boundary Hausdorff distance at n=" + fmt_u(n_max) + " is " +
                                     fmt_g17(worst_final_b) + " < " + fmt_g17(target) +
                                     " in every trial");
  if (reached) ck.note("both distances first under target at recorded step " + fmt_u(reached));
  audit_monotone(ck, rows, 2, "symm diff", c.value("audit_slack_symmdiff", 2.0 * h * per));
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// orbit-density: folding-map orbits of a five-direction set fill the circle.

ExpResult run_orbit_density(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  std::vector<Direction> dirs;
  for (const json& a : c.at("directions")) dirs.push_back(Direction(vec_from(a, d)));
  dirs = make_direction_set(std::move(dirs));

  std::vector<std::uint64_t> budgets;
  for (const json& v : c.at("budgets")) budgets.push_back(v.get<std::uint64_t>());
  if (budgets.empty() || !std::is_sorted(budgets.begin(), budgets.end()))
    throw ConfigError("budgets must be a nondecreasing nonempty list");
  const std::size_t probes = c.at("probes").get<std::size_t>();

  Direction x0 = [&] {
    if (c.contains("x0")) return Direction(vec_from(c.at("x0"), d));
    if (d != 2) throw ConfigError("x0 is required when d != 2");
    const double a = c.value("x0_angle", 0.3);
    return Direction(Vec{std::cos(a), std::sin(a)});
  }();

  const auto orbit = orbit_expand(dirs, x0, budgets.back());

  Checks ck;
  double worst_norm = 0.0;
  for (const Vec& p : orbit) worst_norm = std::max(worst_norm, std::fabs(p.norm() - 1.0));
  ck.add(worst_norm <= 1e-9,
         "all " + std::to_string(orbit.size()) + " orbit points on the sphere within 1e-9 " +
             "(worst " + fmt_g17(worst_norm) + ")");

  CsvWriter budget_csv(path_in(ctx, "covering.csv"), {"budget", "points", "covering_radius"});
  ChartSeries cov_s{"covering radius", {}, {}};
  std::vector<double> radii;
  for (std::uint64_t b : budgets) {
    const std::size_t take = std::min<std::size_t>(orbit.size(), b);
    std::vector<Vec> prefix(orbit.begin(), orbit.begin() + static_cast<std::ptrdiff_t>(take));
    const double cr = covering_radius(prefix, probes);
    radii.push_back(cr);
    budget_csv.row({static_cast<double>(b), static_cast<double>(take), cr});
    cov_s.x.push_back(static_cast<double>(b));
    cov_s.y.push_back(cr);
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"orbit covering radius vs budget", "budget", "covering radius", true, true},
                   {cov_s});

  bool mono = true;
  for (std::size_t i = 1; i < radii.size(); ++i) mono = mono && radii[i] <= radii[i - 1] + 1e-15;
  ck.add(mono, "covering radius nonincreasing in budget");
  const double target = c.value("covering_threshold", 0.05);
  ck.add(radii.back() < target, "covering radius at budget " + fmt_u(budgets.back()) + " is " +
                                    fmt_g17(radii.back()) + " < " + fmt_g17(target));

  const long long q = c.value("max_denominator", 10000LL);
  GeneratingReport rep = generating_heuristics(dirs, q);
  ck.add(rep.spans, "directions span the space");
  ck.add(rep.no_orthogonal_split, "non-orthogonality graph is connected");
  ck.add(rep.irrational_angle, "some pairwise angle clears every p*pi/q, q <= " +
                                   std::to_string(q) + " (margin " +
                                   fmt_g17(rep.best_margin) + ")");

  const std::size_t dump = std::min<std::size_t>(orbit.size(), c.value("dump_points", 10000));
  std::vector<std::string> header;
  for (int i = 0; i < d; ++i) header.push_back("x" + std::to_string(i));
  CsvWriter pts(path_in(ctx, "orbit-points.csv"), header);
  for (std::size_t i = 0; i < dump; ++i) {
    std::vector<double> row(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = orbit[i][j];
    pts.row(row);
  }
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------
// divergence-audit: the three step-size schedules whose divergence drives
// almost-sure convergence; reports when each partial sum crosses a threshold.

ExpResult run_divergence_audit(const Ctx& ctx) {
  const json& c = ctx.cfg;
  const int d = c.at("d").get<int>();
  const double big_l = c.at("L").get<double>();
  const double threshold = c.value("threshold", 10.0);
  const std::size_t csv_terms = c.value("csv_terms", std::size_t{10000});

  struct Family {
    std::string label;
    SamplerSpec spec;
    std::uint64_t cap;
  };
  GaussianPolarSpec loglog{GaussianSchedule::LogLogInverse, c.value("t0", 1.0)};
  GaussianPolarSpec power{GaussianSchedule::PowerTwoOverD, c.value("t0", 1.0)};
  PoissonDirectionSpec poisson{Direction::axis(d, 0), c.value("z0", 0.5),
                               PoissonSchedule::ApproachOne};
  std::vector<std::uint64_t> caps{1000000, 1000000, 1000000000};
  if (c.contains("caps")) {
    caps.clear();
    for (const json& v : c.at("caps")) caps.push_back(v.get<std::uint64_t>());
    if (caps.size() != 3) throw ConfigError("caps must list three entries");
  }
  const std::vector<Family> fams{{"gaussian loglog-inverse", loglog, caps[0]},
                                 {"gaussian power-two-over-d", power, caps[1]},
                                 {"poisson approach-one", poisson, caps[2]}};

  std::vector<DivergenceAudit> audits;
  for (const Family& f : fams) audits.push_back(divergence_audit(f.spec, d, big_l, csv_terms));

  CsvWriter sums(path_in(ctx, "partial-sums.csv"),
                 {"i", "gaussian_loglog", "gaussian_power", "poisson_approach_one"});
  std::vector<ChartSeries> series;
  for (const Family& f : fams) series.push_back({f.label, {}, {}});
  for (std::size_t i = 0; i < csv_terms; ++i) {
    sums.row({static_cast<double>(i + 1), audits[0].partial_sums[i], audits[1].partial_sums[i],
              audits[2].partial_sums[i]});
    if ((i + 1) % 10 == 0 || i < 10)
      for (std::size_t f = 0; f < fams.size(); ++f) {
        series[f].x.push_back(static_cast<double>(i + 1));
        series[f].y.push_back(audits[f].partial_sums[i]);
      }
  }
  write_line_chart(path_in(ctx, "chart.svg"),
                   {"divergence of schedule partial sums", "term i", "partial sum", true, false},
                   series);

  Checks ck;
  CsvWriter cross(path_in(ctx, "crossings.csv"), {"family", "threshold", "crossing_n", "cap"});
  for (std::size_t f = 0; f < fams.size(); ++f) {
    ck.add(audits[f].nonnegative_terms, fams[f].label + ": terms nonnegative");
    const std::uint64_t n = divergence_crossing(fams[f].spec, d, big_l, threshold, fams[f].cap);
    cross.row({static_cast<double>(f), threshold, static_cast<double>(n),
               static_cast<double>(fams[f].cap)});
    ck.add(n > 0, fams[f].label + ": partial sum exceeds " + fmt_g17(threshold) + " at N = " +
                      (n ? fmt_u(n) : "(not reached by cap " + fmt_u(fams[f].cap) + ")"));
  }
  return {ck.all, "", ck.lines, ctx.out};
}

// ---------------------------------------------------------------------------

struct Entry {
  const char* name;
  const char* blurb;
  const char* defaults;
  ExpResult (*fn)(const Ctx&);
};

const Entry kRegistry[] = {
    {"conv-polar",
     "random polarizations drive a cone to its rearrangement (sup and L1 decay)",
     R"({"d":2,"L":1.0,"n_cells":256,"trials":3,"n_max":10000,"record":"geometric",
         "apex":[0.4,0.0],"height":0.5,
         "sampler":{"kind":"finite-iid","r_max":2.0,
           "directions":[[1.0,0.0],[-1.0,0.0],[0.0,1.0],[0.0,-1.0],
                         [0.5403023058681398,0.8414709848078965]]}})",
     run_conv_polar},
    {"rate-uniform",
     "expected-error decay under uniform reflections (set-square | holder-cone)",
     R"({"variant":"set-square","d":2,"L":2.0,"n_cells":256,"trials":200,"n_max":500,
         "record":"all","square_area":3.141592653589793,"square_center":[0.5,0.5],
         "apex":[0.4,0.0],"height":0.5,"check_steps":[10,100,1000],
         "sampler":{"kind":"uniform-polar","L":2.0}})",
     run_rate_uniform},
    {"recursion-audit",
     "normalized symmetric difference obeys the one-step quadratic recursion",
     R"({"d":2,"L":2.0,"n_cells":128,"trials":100,"n_max":200,
         "square_area":3.141592653589793,"square_center":[0.5,0.5],
         "sampler":{"kind":"uniform-polar","L":2.0}})",
     run_recursion_audit},
    {"lower-cone",
     "mean apex norm of a polarized cone stays above the 2^-n lower bound",
     R"({"d":2,"trials":10000,"n_max":20,"apex":[0.5,0.0],
         "sampler":{"kind":"uniform-polar","L":2.0}})",
     run_lower_cone},
    {"lower-ellipsoid",
     "mean certified sup distance of a flattened ellipsoid stays above 3^-n/4",
     R"({"d":3,"trials":10000,"n_max":15,
         "m0_diag":[1.4,1.2,0.5952380952380952],
         "sampler":{"kind":"uniform-direction"}})",
     run_lower_ellipsoid},
    {"nonconv-cone",
     "feedback-chosen reflections pin the cone apex away from the origin",
     R"({"d":2,"n_max":10000,"eps":0.1,"apex":[0.8,0.0],
         "sampler":{"kind":"uniform-polar","L":2.0}})",
     run_nonconv_cone},
    {"nonconv-steiner",
     "feedback-chosen directions keep the ellipsoid eigenvalue gap open",
     R"({"d":2,"n_max":10000,"eps":0.2,"m0_diag":[2.0,0.5],
         "sampler":{"kind":"uniform-direction"}})",
     run_nonconv_steiner},
    {"steiner-rate",
     "sup-error decay of an ellipsoid under uniform random flattening",
     R"({"d":3,"trials":2000,"n_max":200,"m0_diag":[2.0,1.0,0.5],
         "sampler":{"kind":"uniform-direction"}})",
     run_steiner_rate},
    {"compact-hausdorff",
     "Hausdorff convergence of a notched annulus to the centered disk",
     R"({"d":2,"L":2.0,"n_cells":256,"trials":3,"n_max":10000,"record":"geometric",
         "r_inner":0.6,"r_outer":1.5,"notch_half":0.125,
         "sampler":{"kind":"finite-iid","r_max":4.0,
           "directions":[[1.0,0.0],[-1.0,0.0],[0.0,1.0],[0.0,-1.0],
                         [0.5403023058681398,0.8414709848078965]]}})",
     run_compact_hausdorff},
    {"orbit-density",
     "folding-map orbit of a five-direction set fills the circle",
     R"({"d":2,"budgets":[100,1000,10000,100000],"probes":8192,"x0_angle":0.3,
         "max_denominator":10000,
         "directions":[[1.0,0.0],[-1.0,0.0],[0.0,1.0],[0.0,-1.0],
                       [0.5403023058681398,0.8414709848078965]]})",
     run_orbit_density},
    {"divergence-audit",
     "partial sums of the three divergence schedules cross a fixed threshold",
     R"({"d":2,"L":1.0,"threshold":10.0,"csv_terms":10000})",
     run_divergence_audit},
};

const Entry& find_entry(const std::string& name) {
  for (const Entry& e : kRegistry)
    if (name == e.name) return e;
  throw ConfigError("unknown experiment: " + name);
}

ExpResult run_merged(const json& user, const RunOptions& opt) {
  if (!user.is_object() || !user.contains("experiment"))
    throw ConfigError("config must be an object with an \"experiment\" field");
  const std::string name = user.at("experiment").get<std::string>();
  const Entry& entry = find_entry(name);

  Ctx ctx;
  ctx.cfg = merge_into(json::parse(entry.defaults), user);
  ctx.seed = opt.seed ? *opt.seed : ctx.cfg.value("seed", std::uint64_t{1});
  ctx.out = opt.out_dir ? *opt.out_dir : ctx.cfg.value("out", "out/" + name);
  if (opt.threads)
    ctx.threads = *opt.threads;
  else if (ctx.cfg.contains("threads"))
    ctx.threads = ctx.cfg.at("threads").get<int>();
  else if (const char* env = std::getenv("LAB_THREADS"))
    ctx.threads = std::max(1, std::atoi(env));
  else
    ctx.threads = 1;

  fs::create_directories(ctx.out);
  ExpResult r = entry.fn(ctx);
  r.name = name;
  r.out_dir = ctx.out;

  std::ofstream summary(path_in(ctx, "summary.txt"), std::ios::binary);
  summary << name << ": " << (r.pass ? "PASS" : "FAIL") << "\nseed " << ctx.seed
          << "\n" << r.summary;
  return r;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> experiment_list() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Entry& e : kRegistry) out.emplace_back(e.name, e.blurb);
  return out;
}

ExpResult run_experiment_file(const std::string& config_path, const RunOptions& opt) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config: " + config_path);
  json user;
  try {
    in >> user;
  } catch (const json::exception& e) {
    throw ConfigError("bad JSON in " + config_path + ": " + e.what());
  }
  return run_merged(user, opt);
}

ExpResult run_experiment_text(const std::string& config_json, const RunOptions& opt) {
  json user;
  try {
    user = json::parse(config_json);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad JSON config: ") + e.what());
  }
  return run_merged(user, opt);
}

}  // namespace lab
