#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "interarrival.hpp"
#include "levy_models.hpp"
#include "model.hpp"
#include "numerics.hpp"
#include "rng.hpp"

namespace ruinlab {

struct SimPolicy {
  int n_sub = 64;                    // substeps per interarrival block
  double eps_A = 1e-12;              // stop once A_n = M_1 ... M_n drops below this
  std::uint64_t n_max_claims = 1'000'000;
  double t_max = kInf;
  double u_margin = 0.0;
  int refine_steps = 20;             // time bisections inside the crossing substep
  bool operator==(const SimPolicy&) const = default;
};

inline void validate(const SimPolicy& p) {
  require(p.n_sub >= 1, ErrorKind::InvalidModel, "policy: n_sub must be >= 1");
  require(p.eps_A > 0 && p.eps_A < 1, ErrorKind::InvalidModel, "policy: eps_A must lie in (0, 1)");
  require(p.n_max_claims >= 1, ErrorKind::InvalidModel, "policy: n_max_claims must be >= 1");
  require(p.t_max > 0, ErrorKind::InvalidModel, "policy: t_max must be positive");
  require(p.u_margin >= 0, ErrorKind::InvalidModel, "policy: u_margin must be >= 0");
  require(p.refine_steps >= 0, ErrorKind::InvalidModel, "policy: refine_steps must be >= 0");
}

// One interarrival block: Q_k = -\int e^{-(V_{s-} - V_{T_{k-1}})} dP_s, M_k = e^{-(V_{T_k} - V_{T_{k-1}})}.
struct QMPair {
  double Q = 0.0;
  double M = 1.0;
};

// Node data of one block, relative to the block start (V = 0 at t = 0).
// Jumps of V sit exactly on nodes: v_pre is V(t-), v_post is V(t).
struct BlockPath {
  double length = 0.0;
  double claim = 0.0;
  std::vector<double> t;
  std::vector<double> v_pre;
  std::vector<double> v_post;
  std::vector<double> drift_integral;  // \int_0^{t_i} e^{-V_s} ds
  std::vector<std::pair<double, double>> jumps;  // (time, size) scratch
  QMPair qm;

  double v_end() const { return v_pre.back(); }
  std::size_t size() const { return t.size(); }
  void clear() {
    t.clear();
    v_pre.clear();
    v_post.clear();
    drift_integral.clear();
  }
};

// Clock D^r: time since the last claim, restarting from zero at each claim.
inline double advance_clock(double clock, double dt, bool claim) {
  require(dt >= 0, ErrorKind::Precondition, "advance_clock: dt must be >= 0");
  return claim ? 0.0 : clock + dt;
}

enum class Crossing { Continuous, Jump };
enum class CensorReason { ClaimBudget, Horizon };

inline const char* to_string(Crossing c) { return c == Crossing::Continuous ? "continuous" : "jump"; }
inline const char* to_string(CensorReason r) { return r == CensorReason::ClaimBudget ? "claim_budget" : "horizon"; }

struct Ruined {
  double tau;
  double x_at_tau;
  double clock_at_tau;
  Crossing crossing;
  double grid_gap;  // |X| at the substep node where the crossing was detected (continuous only)
  double x_before;  // X just before the crossing claim (jump only)
};

struct Survived {
  double y_final;
  double a_final;
};

struct Censored {
  CensorReason reason;
};

struct PathStats {
  std::uint64_t claims = 0;
  double sup_y = -kInf;
  double elapsed = 0.0;
};

struct TrialResult {
  std::variant<Ruined, Survived, Censored> outcome;
  PathStats stats;

  bool ruined() const { return std::holds_alternative<Ruined>(outcome); }
  bool survived() const { return std::holds_alternative<Survived>(outcome); }
  bool censored() const { return std::holds_alternative<Censored>(outcome); }
  const Ruined& ruin() const { return std::get<Ruined>(outcome); }
};

struct YinfSample {
  double value = 0.0;
  std::uint64_t blocks = 0;  // truncation index
};

// Per-node callbacks for path inspection; all values are global (V_0 = 0, Y_0 = 0).
struct NodeEvent {
  double t;
  double v_pre;
  double v_post;
  double y;
  bool block_end;
};

struct ClaimEvent {
  double t;
  double xi;
  double v;
  double y_after;
};

struct NullObserver {
  void on_node(const NodeEvent&) {}
  void on_claim(const ClaimEvent&) {}
};

class PathEngine {
 public:
  PathEngine(Model model, SimPolicy policy)
      : model_(std::move(model)), policy_(policy) {
    validate(policy_);
    validate(model_.business);
    first_law_ = residual_law(model_.business.interarrival, model_.business.r);
    drift_ = model_.log_law.path_drift();
    sigma_ = std::sqrt(model_.log_law.sigma2);
    rules_ = crossing_rules(model_.business);
  }

  const Model& model() const noexcept { return model_; }
  const SimPolicy& policy() const noexcept { return policy_; }
  const InterarrivalLaw& first_law() const noexcept { return first_law_; }

  // Draw order: block length, claim, jump times and marks per component,
  // then one Gaussian per node segment (none when sigma = 0).
  const QMPair& simulate_block(bool first, Rng& rng, BlockPath& path) const {
    path.clear();
    const double T = sample(first ? first_law_ : model_.business.interarrival, rng);
    const double xi = sample(model_.business.claims, rng);
    path.length = T;
    path.claim = xi;

    auto& jumps = path.jumps;
    jumps.clear();
    for (const auto& comp : model_.log_law.jumps) {
      double s = rng.exponential(comp.rate);
      while (s < T) {
        jumps.emplace_back(s, sample(comp.law, rng));
        s += rng.exponential(comp.rate);
      }
    }
    std::sort(jumps.begin(), jumps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const int n = policy_.n_sub;
    path.t.push_back(0.0);
    path.v_pre.push_back(0.0);
    path.v_post.push_back(0.0);
    path.drift_integral.push_back(0.0);

    double t_cur = 0.0, v_cur = 0.0, integral = 0.0;
    std::size_t next_jump = 0;
    int k = 1;
    while (k <= n) {
      const double grid_t = k == n ? T : T * k / n;
      const bool take_jump = next_jump < jumps.size() && jumps[next_jump].first < grid_t;
      const double t_next = take_jump ? jumps[next_jump].first : grid_t;
      const double dt = t_next - t_cur;
      double dv = drift_ * dt;
      if (sigma_ > 0) dv += sigma_ * std::sqrt(dt) * rng.normal();
      const double v_left = v_cur + dv;
      // exact integral of e^{-V} when V is linear across the segment
      integral += dt * std::exp(-v_cur) * one_minus_exp_over(dv);
      double v_right = v_left;
      if (take_jump) {
        v_right += jumps[next_jump].second;
        ++next_jump;
      } else {
        ++k;
      }
      path.t.push_back(t_next);
      path.v_pre.push_back(v_left);
      path.v_post.push_back(v_right);
      path.drift_integral.push_back(integral);
      t_cur = t_next;
      v_cur = v_right;
    }
    const double m = std::exp(-path.v_end());
    path.qm = {-model_.business.c * integral - m * xi, m};
    return path.qm;
  }

  template <class Observer = NullObserver>
  TrialResult run_trial(double u, Rng& rng, Observer&& obs = {}) const {
    require(u > 0, ErrorKind::Precondition, "run_trial: u must be positive");
    constexpr bool observing = !std::is_same_v<std::decay_t<Observer>, NullObserver>;
    const double c = model_.business.c;
    BlockPath path;
    reserve(path);

    TrialResult res;
    PathStats& st = res.stats;
    st.sup_y = 0.0;
    double Y = 0.0, A = 1.0, Vg = 0.0, t0 = 0.0;
    double clock = model_.business.r;

    for (;;) {
      if (st.claims >= policy_.n_max_claims) {
        res.outcome = Censored{CensorReason::ClaimBudget};
        return res;
      }
      if (t0 >= policy_.t_max) {
        res.outcome = Censored{CensorReason::Horizon};
        return res;
      }
      const QMPair qm = simulate_block(st.claims == 0, rng, path);
      const std::size_t last = path.size() - 1;
      const double slope = -c * A;  // dY = A (-c) e^{-V} ds between claims

      for (std::size_t i = 1; i <= last; ++i) {
        const double y_i = Y + slope * path.drift_integral[i];
        if constexpr (observing)
          obs.on_node({t0 + path.t[i], Vg + path.v_pre[i], Vg + path.v_post[i], y_i, i == last});
        if (rules_.continuous && y_i >= u) {
          st.sup_y = std::max(st.sup_y, y_i);
          res.outcome = refine_crossing(path, i, Y, slope, u, Vg, t0, clock);
          st.elapsed = std::get<Ruined>(res.outcome).tau;
          return res;
        }
        if (t0 + path.t[i] > policy_.t_max) {
          st.sup_y = std::max(st.sup_y, y_i);
          st.elapsed = policy_.t_max;
          res.outcome = Censored{CensorReason::Horizon};
          return res;
        }
      }
      const double y_pre = Y + slope * path.drift_integral[last];
      st.sup_y = std::max(st.sup_y, y_pre);

      const double y_post = Y + A * qm.Q;
      const double v_end = Vg + path.v_end();
      const double t_claim = t0 + path.length;
      if constexpr (observing) obs.on_claim({t_claim, path.claim, v_end, y_post});
      ++st.claims;
      st.elapsed = t_claim;
      st.sup_y = std::max(st.sup_y, y_post);
      if (rules_.jump && y_post >= u) {
        const double scale = std::exp(v_end);
        res.outcome = Ruined{t_claim, scale * (u - y_post), advance_clock(clock, path.length, true),
                             Crossing::Jump, 0.0, scale * (u - y_pre)};
        return res;
      }
      Y = y_post;
      A *= qm.M;
      Vg = v_end;
      t0 = t_claim;
      clock = advance_clock(clock, path.length, true);
      if (A < policy_.eps_A && Y < u - policy_.u_margin) {
        res.outcome = Survived{Y, A};
        return res;
      }
    }
  }

  // Truncated series Y_inf = Q_1 + sum_k A_{k-1} Q_k, stopping once A_n < eps_A.
  // A nonzero start (y0, a0) continues a series: the result is y0 + a0 * Y~.
  std::optional<YinfSample> try_sample_yinf(Rng& rng, bool first_from_residual = true, double y0 = 0.0,
                                            double a0 = 1.0) const {
    BlockPath path;
    reserve(path);
    double Y = y0, A = a0;
    for (std::uint64_t n = 0; n < policy_.n_max_claims;) {
      const QMPair qm = simulate_block(first_from_residual && n == 0, rng, path);
      Y += A * qm.Q;
      A *= qm.M;
      ++n;
      if (A < policy_.eps_A) return YinfSample{Y, n};
    }
    return std::nullopt;
  }

  YinfSample sample_yinf(Rng& rng, bool first_from_residual = true) const {
    if (auto s = try_sample_yinf(rng, first_from_residual)) return *s;
    fail(ErrorKind::CensoredSample, "sample_Yinf: n_max_claims reached before A_n < eps_A");
  }

 private:
  void reserve(BlockPath& p) const {
    const std::size_t cap = static_cast<std::size_t>(policy_.n_sub) + 32;
    p.t.reserve(cap);
    p.v_pre.reserve(cap);
    p.v_post.reserve(cap);
    p.drift_integral.reserve(cap);
  }

  // Y is monotone inside the substep [i-1, i]; bisect on the interpolated
  // accumulation with V linear between the two nodes.
  Ruined refine_crossing(const BlockPath& path, std::size_t i, double Y, double slope, double u, double Vg,
                         double t0, double clock) const {
    const double ta = path.t[i - 1], dt = path.t[i] - ta;
    const double va = path.v_post[i - 1], dv = path.v_pre[i] - va;
    const double base = path.drift_integral[i - 1];
    auto y_at = [&](double s) {
      return Y + slope * (base + s * std::exp(-va) * one_minus_exp_over(dv * s / dt));
    };
    double lo = 0.0, hi = dt;
    for (int k = 0; k < policy_.refine_steps; ++k) {
      const double mid = 0.5 * (lo + hi);
      (y_at(mid) >= u ? hi : lo) = mid;
    }
    const double y_tau = hi == dt ? Y + slope * path.drift_integral[i] : y_at(hi);
    const double v_tau = Vg + va + dv * hi / dt;
    const double y_node = Y + slope * path.drift_integral[i];
    const double gap = std::fabs(std::exp(Vg + path.v_pre[i]) * (u - y_node));
    const double local = ta + hi;
    return Ruined{t0 + local, std::exp(v_tau) * (u - y_tau), advance_clock(clock, local, false),
                  Crossing::Continuous, gap, 0.0};
  }

  Model model_;
  SimPolicy policy_;
  InterarrivalLaw first_law_;
  double drift_ = 0.0;
  double sigma_ = 0.0;
  CrossingRules rules_{};
};

// Free-function forms.
inline QMPair simulate_block(const Model& model, bool first, Rng& rng, const SimPolicy& policy = {}) {
  PathEngine engine(model, policy);
  BlockPath path;
  return engine.simulate_block(first, rng, path);
}

inline TrialResult run_trial(const Model& model, double u, const SimPolicy& policy, Rng& rng) {
  return PathEngine(model, policy).run_trial(u, rng);
}

inline YinfSample sample_Yinf(const Model& model, const SimPolicy& policy, Rng& rng) {
  return PathEngine(model, policy).sample_yinf(rng);
}

}  // namespace ruinlab
