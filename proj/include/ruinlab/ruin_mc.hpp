#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "path_engine.hpp"
#include "rng.hpp"
#include "tail_stats.hpp"

namespace ruinlab {

inline constexpr double kZ95 = 1.959963984540054;

struct ProportionCI {
  double lo = 0.0, hi = 1.0;
};

// Wilson score interval.
inline ProportionCI wilson(std::uint64_t k, std::uint64_t n, double z = kZ95) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n), p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double den = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / den;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
  return {k == 0 ? 0.0 : std::clamp(center - half, 0.0, 1.0), k == n ? 1.0 : std::clamp(center + half, 0.0, 1.0)};
}

struct RunSettings {
  std::uint64_t n = 10'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ (tag * 0xA0761D6478BD642FULL));
}

struct RuinEstimate {
  double u = 0.0, r = 0.0;
  std::uint64_t n_trials = 0, k_ruined = 0, k_censored = 0;
  double p_low = 0.0, p_high = 0.0;
  ProportionCI ci_low, ci_high;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  bool all_censored = false;
};

namespace detail {

enum class PathStatus : std::uint8_t { Ruined, Survived, Censored };

inline RuinEstimate finish_estimate(double u, double r, std::uint64_t n, std::uint64_t k_r, std::uint64_t k_c,
                                    std::uint64_t seed, double wall) {
  RuinEstimate e;
  e.u = u;
  e.r = r;
  e.n_trials = n;
  e.k_ruined = k_r;
  e.k_censored = k_c;
  e.p_low = static_cast<double>(k_r) / static_cast<double>(n);
  e.p_high = static_cast<double>(k_r + k_c) / static_cast<double>(n);
  e.ci_low = wilson(k_r, n);
  e.ci_high = wilson(k_r + k_c, n);
  e.seed = seed;
  e.wall_seconds = wall;
  e.all_censored = k_c == n;
  return e;
}

}  // namespace detail

// Ruin frequencies on a u-grid from one set of paths. Each path runs to ruin
// at the largest u, certified survival, or censoring; the ruin indicator for
// a smaller u is {sup Y >= u}, identical to running that u on its own since
// the randomness does not depend on u.
inline std::vector<RuinEstimate> estimate_ruin_grid(const Model& model, std::span<const double> u_grid,
                                                    const SimPolicy& policy, const RunSettings& run) {
  require(run.n >= 1, ErrorKind::Precondition, "estimate_ruin: n_trials must be >= 1");
  require(!u_grid.empty(), ErrorKind::Precondition, "estimate_ruin: empty u-grid");
  for (double u : u_grid) require(u > 0, ErrorKind::Precondition, "estimate_ruin: u must be positive");
  const auto t_start = std::chrono::steady_clock::now();
  const PathEngine engine(model, policy);
  const double u_max = *std::max_element(u_grid.begin(), u_grid.end());

  std::vector<double> sup_y(run.n);
  std::vector<detail::PathStatus> status(run.n);
  parallel_for(run.n, run.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(run.seed, Stream::Trial, i);
      const TrialResult tr = engine.run_trial(u_max, rng);
      sup_y[i] = tr.stats.sup_y;
      status[i] = tr.ruined() ? detail::PathStatus::Ruined
                  : tr.survived() ? detail::PathStatus::Survived
                                  : detail::PathStatus::Censored;
    }
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  std::vector<RuinEstimate> out;
  for (double u : u_grid) {
    std::uint64_t k_r = 0, k_c = 0;
    for (std::size_t i = 0; i < run.n; ++i) {
      if (sup_y[i] >= u) ++k_r;
      else if (status[i] == detail::PathStatus::Censored) ++k_c;
    }
    out.push_back(detail::finish_estimate(u, model.business.r, run.n, k_r, k_c, run.seed, wall));
  }
  return out;
}

inline RuinEstimate estimate_ruin(const Model& model, double u, const SimPolicy& policy, const RunSettings& run) {
  const double grid[] = {u};
  return estimate_ruin_grid(model, grid, policy, run).front();
}

struct YinfBatch {
  std::vector<double> values;  // completed samples in index order
  std::uint64_t n_requested = 0;
  std::uint64_t n_censored = 0;
  double censored_fraction() const {
    return n_requested ? static_cast<double>(n_censored) / static_cast<double>(n_requested) : 0.0;
  }
};

inline YinfBatch sample_yinf_batch(const Model& model, const SimPolicy& policy, const RunSettings& run,
                                   Stream stream = Stream::Yinf) {
  const PathEngine engine(model, policy);
  std::vector<double> vals(run.n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(run.n, run.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(run.seed, stream, i);
      if (auto s = engine.try_sample_yinf(rng)) vals[i] = s->value;
    }
  });
  YinfBatch b;
  b.n_requested = run.n;
  b.values.reserve(run.n);
  for (double v : vals) {
    if (std::isnan(v)) ++b.n_censored;
    else b.values.push_back(v);
  }
  return b;
}

inline Model with_initial_clock(Model m, double r) {
  m.business.r = r;
  validate(m.business);
  return m;
}

struct GstarEstimate {
  std::vector<double> r_grid;          // points actually used
  std::vector<double> r_skipped;       // P[T > r] = 0
  std::vector<double> gbar0;           // Gbar(0, r) per used r
  std::vector<ProportionCI> gbar0_ci;
  double g_star = 0.0;                 // min over r of the point estimates
  double g_star_low = 0.0;             // min over r of the lower interval ends
  double g_star_high = 0.0;            // interval end at the argmin
  double argmin_r = 0.0;
  bool flagged = false;                // censoring above 1% somewhere
};

struct GbarEstimate {
  double r = 0.0;
  std::vector<double> u_grid;
  std::uint64_t n = 0, n_censored = 0;
  std::vector<std::uint64_t> k_above;
  std::vector<double> gbar;
  std::vector<ProportionCI> ci;
  bool flagged = false;
  std::vector<double> samples;
  GstarEstimate gstar;
};

inline std::vector<double> default_r_grid(const Model& model) {
  const double m = mean(model.business.interarrival);
  std::vector<double> g;
  for (double f : {0.0, 0.25, 0.5, 1.0, 2.0, 5.0}) g.push_back(f * m);
  return g;
}

inline GstarEstimate estimate_Gstar(const Model& model, std::span<const double> r_grid, const SimPolicy& policy,
                                    const RunSettings& run) {
  GstarEstimate g;
  g.g_star = kInf;
  g.g_star_low = kInf;
  std::uint64_t tag = 100;
  for (double r : r_grid) {
    ++tag;
    if (!(survival(model.business.interarrival, r) > 0)) {
      g.r_skipped.push_back(r);
      continue;
    }
    RunSettings sub = run;
    sub.seed = derive_seed(run.seed, tag);
    const YinfBatch b = sample_yinf_batch(with_initial_clock(model, r), policy, sub);
    std::uint64_t k = 0;
    for (double y : b.values) k += y > 0;
    const std::uint64_t n_ok = b.values.size();
    const double est = n_ok ? static_cast<double>(k) / static_cast<double>(n_ok) : 0.0;
    const ProportionCI ci = wilson(k, n_ok);
    g.r_grid.push_back(r);
    g.gbar0.push_back(est);
    g.gbar0_ci.push_back(ci);
    g.flagged = g.flagged || b.censored_fraction() > 0.01;
    if (est < g.g_star) {
      g.g_star = est;
      g.g_star_high = ci.hi;
      g.argmin_r = r;
    }
    g.g_star_low = std::min(g.g_star_low, ci.lo);
  }
  require(!g.r_grid.empty(), ErrorKind::Precondition, "estimate_Gstar: no admissible r in the grid");
  return g;
}

// Empirical survival function of Y^r_inf on a u-grid, plus Gbar_* over r_grid
// (skipped when r_grid is empty).
inline GbarEstimate estimate_Gbar(const Model& model, std::span<const double> u_grid, double r,
                                  const SimPolicy& policy, const RunSettings& run,
                                  std::span<const double> r_grid = {}) {
  require(run.n >= 1000, ErrorKind::Precondition, "estimate_Gbar: need n >= 1000 samples");
  GbarEstimate g;
  g.r = r;
  g.u_grid.assign(u_grid.begin(), u_grid.end());
  YinfBatch b = sample_yinf_batch(with_initial_clock(model, r), policy, run);
  g.n = b.values.size();
  g.n_censored = b.n_censored;
  g.flagged = b.censored_fraction() > 0.01;
  for (double u : u_grid) {
    std::uint64_t k = 0;
    for (double y : b.values) k += y > u;
    g.k_above.push_back(k);
    g.gbar.push_back(g.n ? static_cast<double>(k) / static_cast<double>(g.n) : 0.0);
    g.ci.push_back(wilson(k, g.n));
  }
  g.samples = std::move(b.values);
  if (!r_grid.empty()) g.gstar = estimate_Gstar(model, r_grid, policy, run);
  return g;
}

enum class CheckStatus { Pass, Fail, Inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct SandwichRow {
  double u = 0.0;
  double gbar_low = 0.0, gbar_high = 0.0;     // interval ends of Gbar(u, r)
  double psi_low_low = 0.0, psi_high_high = 0.0;  // lower end of p_low, upper end of p_high
  double upper_bound = 0.0;                   // gbar_high / g_star_low
  bool lower_ok = false;
  CheckStatus upper = CheckStatus::Inconclusive;
  double lower_margin = 0.0;                  // psi_high_high - gbar_low
  double upper_margin = 0.0;                  // upper_bound - psi_low_low
  std::string note;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  std::vector<RuinEstimate> ruin;
  GbarEstimate gbar;
  CheckStatus status = CheckStatus::Inconclusive;
  bool degenerate_yinf = false;
};

// Gbar(u,r) <= Psi(u,r) <= Gbar(u,r) / Gbar_*, checked with the conservative
// interval ends. The upper bound needs Gbar > 0 everywhere; at grid points
// with no sample above u, or when Gbar_* is not bounded away from zero, the
// upper check is inconclusive rather than failed.
inline SandwichReport sandwich_check(const Model& model, std::span<const double> u_grid, const SimPolicy& policy,
                                     const RunSettings& ruin_run, const RunSettings& yinf_run,
                                     std::span<const double> r_grid) {
  SandwichReport rep;
  rep.ruin = estimate_ruin_grid(model, u_grid, policy, ruin_run);
  rep.gbar = estimate_Gbar(model, u_grid, model.business.r, policy, yinf_run, r_grid);
  const auto& s = rep.gbar.samples;
  rep.degenerate_yinf = !s.empty() && std::all_of(s.begin(), s.end(), [&](double y) { return y == s.front(); });
  const double g_low = rep.gbar.gstar.g_star_low;

  bool any_fail = false, any_inconclusive = false;
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    SandwichRow row;
    row.u = u_grid[i];
    row.gbar_low = rep.gbar.ci[i].lo;
    row.gbar_high = rep.gbar.ci[i].hi;
    row.psi_low_low = rep.ruin[i].ci_low.lo;
    row.psi_high_high = rep.ruin[i].ci_high.hi;
    row.lower_ok = row.gbar_low <= row.psi_high_high;
    row.lower_margin = row.psi_high_high - row.gbar_low;
    if (!(g_low > 0)) {
      row.upper = CheckStatus::Inconclusive;
      row.note = "Gbar_* interval contains 0";
    } else if (rep.degenerate_yinf || rep.gbar.k_above[i] == 0) {
      row.upper = CheckStatus::Inconclusive;
      row.note = "no Y_inf sample above u; Gbar(u) > 0 not supported";
    } else {
      row.upper_bound = row.gbar_high / g_low;
      row.upper_margin = row.upper_bound - row.psi_low_low;
      row.upper = row.psi_low_low <= row.upper_bound ? CheckStatus::Pass : CheckStatus::Fail;
    }
    any_fail = any_fail || !row.lower_ok || row.upper == CheckStatus::Fail;
    any_inconclusive = any_inconclusive || row.upper == CheckStatus::Inconclusive;
    rep.rows.push_back(row);
  }
  rep.status = any_fail ? CheckStatus::Fail : any_inconclusive ? CheckStatus::Inconclusive : CheckStatus::Pass;
  return rep;
}

struct FixedPointReport {
  std::uint64_t n_a = 0, n_b = 0;
  std::uint64_t censored = 0;
  KsResult ks;
  bool pass = false;
  bool flagged = false;  // censoring above 1%
  bool mismatched = false;
};

// Compares direct draws of Y^r_inf with Q^r_1 + M^r_1 * Y~ where Y~ is an
// independent Y^0_inf. With `mismatch` the tilde copy also starts from F^r,
// which breaks the identity whenever F^r != F.
inline FixedPointReport fixed_point_check(const Model& model, const SimPolicy& policy, const RunSettings& run,
                                          bool mismatch = false) {
  require(run.n >= 10'000, ErrorKind::Precondition, "fixed_point_check: need n >= 10^4");
  const PathEngine engine(model, policy);
  const YinfBatch a = sample_yinf_batch(model, policy, run, Stream::Yinf);

  std::vector<double> vals(run.n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(run.n, run.threads, [&](std::size_t begin, std::size_t end) {
    BlockPath path;
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(run.seed, Stream::YinfTilde, i);
      const QMPair qm = engine.simulate_block(true, rng, path);
      if (auto s = engine.try_sample_yinf(rng, mismatch, qm.Q, qm.M)) vals[i] = s->value;
    }
  });
  std::vector<double> b;
  b.reserve(run.n);
  std::uint64_t cens_b = 0;
  for (double v : vals) {
    if (std::isnan(v)) ++cens_b;
    else b.push_back(v);
  }
  FixedPointReport rep;
  rep.n_a = a.values.size();
  rep.n_b = b.size();
  rep.censored = a.n_censored + cens_b;
  rep.flagged = static_cast<double>(rep.censored) > 0.01 * 2.0 * static_cast<double>(run.n);
  rep.mismatched = mismatch;
  if (rep.n_a == 0 || rep.n_b == 0) return rep;
  rep.ks = ks_two_sample(a.values, b);
  rep.pass = rep.ks.p_value > 0.01;
  return rep;
}

}  // namespace ruinlab
