#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "path_engine.hpp"
#include "ruin_mc.hpp"

namespace ruinlab {

namespace detail {

struct PathRecorder {
  std::vector<NodeEvent> nodes;
  std::vector<ClaimEvent> claims;
  void on_node(const NodeEvent& e) { nodes.push_back(e); }
  void on_claim(const ClaimEvent& e) { claims.push_back(e); }
};

}  // namespace detail

// Largest relative gap between X rebuilt forward from dX = X_- dR + dP and
// the closed form e^V (u - Y), over every node and claim of one path.
inline double dual_accumulation_error(const PathEngine& engine, double u, Rng& rng) {
  detail::PathRecorder rec;
  engine.run_trial(u, rng, rec);
  const double c = engine.model().business.c;
  double x = u, t = 0, v = 0, worst = 0;
  std::size_t ci = 0;
  auto gap = [&](double xv, double vv, double y) {
    const double ev = std::exp(vv);
    return std::fabs(xv - ev * (u - y)) / (ev * (u + std::fabs(y)));
  };
  for (const auto& nd : rec.nodes) {
    const double dt = nd.t - t, dv = nd.v_pre - v;
    const double growth = std::fabs(dv) < 1e-12 ? dt * (1 + dv / 2) : dt * std::expm1(dv) / dv;
    x = std::exp(dv) * x + c * growth;
    x *= std::exp(nd.v_post - nd.v_pre);
    t = nd.t;
    v = nd.v_post;
    worst = std::max(worst, gap(x, nd.v_post, nd.y));
    if (nd.block_end && ci < rec.claims.size()) {
      x += rec.claims[ci].xi;
      worst = std::max(worst, gap(x, rec.claims[ci].v, rec.claims[ci].y_after));
      ++ci;
    }
  }
  return worst;
}

struct InvariantCount {
  std::uint64_t paths = 0;
  std::uint64_t violations = 0;
  bool pass() const { return violations == 0; }
};

// Same randomness, increasing u: ruin at a larger u implies ruin at every
// smaller u, no later.
inline InvariantCount check_nesting(const PathEngine& engine, std::span<const double> u_sorted, std::uint64_t seed,
                                    std::uint64_t n_paths) {
  InvariantCount out;
  for (std::uint64_t i = 0; i < n_paths; ++i) {
    bool prev_ruined = true;
    double prev_tau = 0;
    bool ok = true;
    for (double u : u_sorted) {
      Rng rng(seed, Stream::Trial, i);
      const TrialResult r = engine.run_trial(u, rng);
      if (r.ruined()) {
        ok = ok && prev_ruined && r.ruin().tau >= prev_tau;
        prev_tau = r.ruin().tau;
      }
      prev_ruined = r.ruined();
    }
    ++out.paths;
    out.violations += !ok;
  }
  return out;
}

// (c, xi, u) -> (k c, k xi, k u) leaves ruin and tau unchanged and scales Y
// by k. Exact in floating point for powers of two.
inline InvariantCount check_scale(const Model& model, const SimPolicy& policy, double k, double u, std::uint64_t seed,
                                  std::uint64_t n_paths) {
  Model scaled_model = model;
  scaled_model.business.c = k * model.business.c;
  scaled_model.business.claims = scaled(model.business.claims, k);
  const PathEngine e0(model, policy), e1(scaled_model, policy);
  InvariantCount out;
  for (std::uint64_t i = 0; i < n_paths; ++i) {
    Rng r0(seed, Stream::Trial, i), r1(seed, Stream::Trial, i);
    const TrialResult a = e0.run_trial(u, r0), b = e1.run_trial(k * u, r1);
    bool ok = a.ruined() == b.ruined() && a.stats.sup_y * k == b.stats.sup_y;
    if (ok && a.ruined())
      ok = a.ruin().tau == b.ruin().tau && a.ruin().crossing == b.ruin().crossing;
    ++out.paths;
    out.violations += !ok;
  }
  return out;
}

inline bool same_counts(std::span<const RuinEstimate> a, std::span<const RuinEstimate> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].k_ruined != b[i].k_ruined || a[i].k_censored != b[i].k_censored) return false;
  return true;
}

}  // namespace ruinlab
