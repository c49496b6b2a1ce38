#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "levy_models.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "path_engine.hpp"

namespace ruinlab {

struct BetaResult {
  double beta = 0.0;
  Interval domain;
  double margin = 0.0;  // q_hi - beta
  int iterations = 0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double residual = 0.0;  // |psi(beta)|
  bool approximate = false;
};

struct BetaSolverOptions {
  double start = 1e-6;
  double cap = 1024.0;  // 2^10
  double boundary_shrink = 1e-9;
  double tolerance = 1e-12;
  int max_iterations = 200;
};

// Positive root of psi. psi is convex with psi(0) = 0, so there is at most one
// positive root, and it exists iff psi dips below zero and comes back.
inline BetaResult solve_beta(const LogPriceLaw& law, bool nondegenerate, const BetaSolverOptions& opt = {}) {
  if (!nondegenerate)
    fail(ErrorKind::DegenerateInvestment, "solve_beta: the return process R is deterministic (sigma = 0, Pi = 0)");
  const Cumulant psi(law);
  const Interval dom = psi.domain();
  const bool capped_by_domain = std::isfinite(dom.hi) && dom.hi * (1.0 - opt.boundary_shrink) < opt.cap;
  const double cap = capped_by_domain ? dom.hi * (1.0 - opt.boundary_shrink) : opt.cap;

  BetaResult res;
  res.domain = dom;
  res.approximate = law.approximate;

  double lo = std::min(opt.start, 0.5 * cap);
  double f_lo = psi(lo);
  if (f_lo >= 0)
    fail(ErrorKind::NoPositiveRoot, "solve_beta: psi'(0) >= 0, the log-price does not drift upward");

  double hi = lo, f_hi = f_lo;
  for (;;) {
    const double next = std::min(2.0 * hi, cap);
    const double f_next = psi(next);
    if (f_next >= 0) {
      hi = next;
      f_hi = f_next;
      break;
    }
    lo = next;
    f_lo = f_next;
    hi = next;
    if (next >= cap) {
      std::ostringstream os;
      os.precision(17);
      if (capped_by_domain) {
        os << "solve_beta: psi stays negative up to the domain boundary q_hi = " << dom.hi
           << "; the root is not interior";
        fail(ErrorKind::RootAtBoundary, os.str());
      }
      os << "solve_beta: psi stays negative on (0, " << cap << "]";
      fail(ErrorKind::NoPositiveRoot, os.str());
    }
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;

  // Illinois variant of regula falsi, falling back to bisection when the
  // secant point is not strictly inside the bracket.
  int side = 0;
  double x = hi, fx = f_hi;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    res.iterations = it;
    if (std::fabs(fx) <= opt.tolerance) break;
    double cand = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    if (cand <= lo || cand >= hi) break;  // bracket exhausted at machine precision
    x = cand;
    fx = psi(x);
    if (fx < 0) {
      lo = x;
      f_lo = fx;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = x;
      f_hi = fx;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    // Keep the bracket shrinking geometrically even when Illinois stalls.
    if (it % 8 == 0) {
      const double mid = 0.5 * (lo + hi);
      const double fm = psi(mid);
      if (fm < 0) {
        lo = mid;
        f_lo = fm;
      } else {
        hi = mid;
        f_hi = fm;
      }
      if (std::fabs(fm) < std::fabs(fx)) {
        x = mid;
        fx = fm;
      }
    }
  }
  if (!(std::fabs(fx) <= opt.tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "solve_beta: no convergence, |psi| = " << std::fabs(fx) << " at q = " << x;
    fail(ErrorKind::NoConvergence, os.str());
  }
  res.beta = x;
  res.residual = std::fabs(fx);
  res.margin = dom.hi - x;
  return res;
}

inline BetaResult solve_beta(const LevyTriplet& triplet, const BetaSolverOptions& opt = {}) {
  return solve_beta(log_price_law(triplet), triplet.nondegenerate(), opt);
}

inline BetaResult solve_beta(const Model& model, const BetaSolverOptions& opt = {}) {
  return solve_beta(model.log_law, model.triplet.nondegenerate(), opt);
}

struct CheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct StandingReport {
  std::vector<CheckItem> checks;
  std::optional<BetaResult> beta;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const CheckItem* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Nondegeneracy, existence and interiority of beta, light-tailed interarrivals
// and E|xi|^beta < inf, each reported separately.
inline StandingReport check_standing_assumption(const Model& model, double interior_margin = 1e-3) {
  StandingReport rep;
  const bool nondeg = model.triplet.nondegenerate();
  rep.checks.push_back({"nondegenerate_investment", nondeg,
                        nondeg ? "sigma^2 > 0 or Pi != 0" : "DegenerateInvestment: sigma = 0 and no jumps"});

  const double s_max = mgf_upper(model.business.interarrival);
  rep.checks.push_back({"interarrival_exponential_moment", s_max > 0,
                        "E[e^{eps T}] < inf for eps < " + std::to_string(s_max)});

  try {
    rep.beta = solve_beta(model);
    rep.checks.push_back({"positive_root", true, "beta = " + std::to_string(rep.beta->beta)});
  } catch (const Error& e) {
    rep.checks.push_back({"positive_root", false, std::string(to_string(e.kind())) + ": " + e.what()});
    return rep;
  }

  const double probe = rep.beta->beta * (1.0 + interior_margin);
  bool interior = false;
  std::string detail;
  try {
    const double H = cumulant_H(model.log_law, model.business.interarrival, probe);
    interior = std::isfinite(H);
    detail = "H(beta(1+delta)) = " + std::to_string(H);
  } catch (const DomainError& e) {
    detail = std::string("RootAtBoundary: ") + e.what();
  }
  rep.checks.push_back({"root_interior", interior, detail});

  const bool moment = abs_moment_finite(model.business.claims, rep.beta->beta);
  rep.checks.push_back({"claim_moment", moment, moment ? "E|xi|^beta < inf" : "E|xi|^beta = inf"});
  return rep;
}

struct SampleMean {
  double mean = 0.0;
  double std_error = 0.0;
  bool tail_stable = false;  // largest single term contributes < 1% of the sum
};

struct UnitMeanReport {
  double beta = 0.0;
  std::uint64_t n = 0;
  SampleMean m_beta;         // E[M^beta]
  bool within_4se = false;   // |mean - 1| <= 4 SE
  SampleMean m_beta_log;     // E[M^beta (ln M)^+]
  SampleMean abs_q_beta;     // E[|Q|^beta]
};

namespace detail {
inline SampleMean summarize(std::span<const double> xs) {
  SampleMean s;
  KahanSum sum;
  double biggest = 0.0;
  for (double x : xs) {
    sum.add(x);
    biggest = std::max(biggest, std::fabs(x));
  }
  const double n = static_cast<double>(xs.size());
  s.mean = sum.value() / n;
  KahanSum sq;
  for (double x : xs) sq.add((x - s.mean) * (x - s.mean));
  s.std_error = xs.size() > 1 ? std::sqrt(sq.value() / (n - 1.0) / n) : 0.0;
  s.tail_stable = std::fabs(sum.value()) > 0 ? biggest / std::fabs(sum.value()) < 0.01 : true;
  return s;
}
}  // namespace detail

// Monte Carlo check of E[M_1^beta] = 1 with M_1 = e^{-V_{T_1}}, blocks drawn
// from F. Values are stored per index and summed in index order, so the
// result does not depend on the thread count.
inline UnitMeanReport verify_unit_mean(const Model& model, double beta, std::uint64_t n, std::uint64_t seed,
                                       unsigned threads = 1, const SimPolicy& policy = {}) {
  require(n >= 10'000, ErrorKind::Precondition, "verify_unit_mean: need n >= 10^4 samples");
  const PathEngine engine(model, policy);
  std::vector<double> mb(n), mbl(n), qb(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    BlockPath path;
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(seed, Stream::Block, i);
      const QMPair qm = engine.simulate_block(false, rng, path);
      const double p = beta == 0.0 ? 1.0 : std::pow(qm.M, beta);
      mb[i] = p;
      mbl[i] = p * std::max(0.0, std::log(qm.M));
      qb[i] = std::pow(std::fabs(qm.Q), beta);
    }
  });
  UnitMeanReport rep;
  rep.beta = beta;
  rep.n = n;
  rep.m_beta = detail::summarize(mb);
  rep.m_beta_log = detail::summarize(mbl);
  rep.abs_q_beta = detail::summarize(qb);
  rep.within_4se = std::fabs(rep.m_beta.mean - 1.0) <= 4.0 * rep.m_beta.std_error;
  return rep;
}

}  // namespace ruinlab
