#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ruinlab/path_engine.hpp"
#include "ruinlab/tail_stats.hpp"

using namespace ruinlab;

namespace {

const double kE = std::numbers::e;

LevyTriplet linear_v() {
  LevyTriplet t;
  t.a = 1.0;  // sigma = 0, no jumps: V_t = t
  return t;
}

Model deterministic_model(double c = -1.0, double xi = 1.0) {
  BusinessSpec b;
  b.c = c;
  b.interarrival = arrival::Deterministic{1.0};
  b.claims = claim::Constant{xi};
  return make_model(linear_v(), b);
}

Model gbm_model(double c, ClaimLaw claims, double a = 0.2, double s2 = 0.2,
                InterarrivalLaw f = arrival::Exponential{1.0}) {
  LevyTriplet t;
  t.a = a;
  t.sigma2 = s2;
  BusinessSpec b;
  b.c = c;
  b.interarrival = f;
  b.claims = claims;
  return make_model(t, b);
}

Model mixed_jump_model(double c, ClaimLaw claims) {
  LevyTriplet t;
  t.a = 0.3;
  t.sigma2 = 0.05;
  t.jumps.push_back({0.8, jump::PointMass{0.4}});
  t.jumps.push_back({0.6, jump::Exponential{-1, 5.0}});
  BusinessSpec b;
  b.c = c;
  b.interarrival = arrival::Gamma{2.0, 0.5};
  b.claims = claims;
  return make_model(t, b);
}

SimPolicy policy(int n_sub = 64) {
  SimPolicy p;
  p.n_sub = n_sub;
  return p;
}

struct Recorder {
  std::vector<NodeEvent> nodes;
  std::vector<ClaimEvent> claims;
  void on_node(const NodeEvent& e) { nodes.push_back(e); }
  void on_claim(const ClaimEvent& e) { claims.push_back(e); }
};

}  // namespace

TEST(AdvanceClock, Examples) {
  EXPECT_DOUBLE_EQ(advance_clock(0.5, 0.2, false), 0.7);
  EXPECT_EQ(advance_clock(3.7, 0.2, true), 0.0);
  EXPECT_EQ(advance_clock(0.25, 0.5, false), advance_clock(advance_clock(0.25, 0.25, false), 0.25, false));
  EXPECT_THROW(advance_clock(0.0, -1.0, false), Error);
}

TEST(SimPolicy, Validation) {
  const Model m = deterministic_model();
  SimPolicy p;
  p.n_sub = 0;
  EXPECT_THROW(PathEngine(m, p), Error);
  p = {};
  p.eps_A = 1.0;
  EXPECT_THROW(PathEngine(m, p), Error);
  p = {};
  p.n_max_claims = 0;
  EXPECT_THROW(PathEngine(m, p), Error);
}

TEST(SimulateBlock, DeterministicClosedForm) {
  const PathEngine e(deterministic_model(), policy());
  Rng rng(1, Stream::Block, 0);
  BlockPath path;
  const QMPair qm = e.simulate_block(true, rng, path);
  EXPECT_NEAR(qm.Q, 1 - 2 / kE, 1e-15);
  EXPECT_NEAR(qm.Q, 0.264241, 1e-6);
  EXPECT_NEAR(qm.M, 1 / kE, 1e-15);
  EXPECT_EQ(path.size(), 65u);
}

TEST(SimulateBlock, ZeroDriftLeavesOnlyTheClaim) {
  const PathEngine e(gbm_model(0.0, claim::Constant{-1.0}, 0.2, 0.2, arrival::Deterministic{1.0}), policy());
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng(2, Stream::Block, i);
    BlockPath path;
    const QMPair qm = e.simulate_block(false, rng, path);
    EXPECT_EQ(qm.Q, qm.M);
    EXPECT_EQ(qm.M, std::exp(-path.v_end()));
  }
}

TEST(SimulateBlock, JumpsSitOnNodes) {
  const PathEngine e(mixed_jump_model(-1.0, claim::Exponential{1, 1.0}), policy(8));
  Rng rng(3, Stream::Block, 0);
  BlockPath path;
  std::size_t jumps = 0;
  for (int k = 0; k < 200; ++k) {
    e.simulate_block(false, rng, path);
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (path.v_pre[i] != path.v_post[i]) ++jumps;
      if (i > 0) {
        EXPECT_GT(path.t[i], path.t[i - 1]);
      }
    }
    EXPECT_EQ(path.t.back(), path.length);
    EXPECT_EQ(path.v_post.back(), path.v_pre.back());
  }
  EXPECT_GT(jumps, 100u);
}

// E[M] = E[e^{T psi(1)}] and E[\int_0^T e^{-V}] = \int P[T > s] e^{s psi(1)} ds in closed form for Exp(1) blocks.
TEST(SimulateBlock, GbmMomentsMatchClosedForms) {
  const Model m = gbm_model(-1.0, claim::Exponential{1, 2.0}, 0.3, 0.2);
  const PathEngine e(m, policy());
  const double psi1 = -0.1;
  const double EM = 1 / (1 - psi1), EI = 1 / (1 - psi1);
  const double EQ = EI - 2.0 * EM;
  const int n = 200'000;
  double sq = 0, sq2 = 0, sm = 0, sm2 = 0;
  BlockPath path;
  for (int i = 0; i < n; ++i) {
    Rng rng(4, Stream::Block, i);
    const QMPair qm = e.simulate_block(false, rng, path);
    sq += qm.Q;
    sq2 += qm.Q * qm.Q;
    sm += qm.M;
    sm2 += qm.M * qm.M;
  }
  const double mq = sq / n, mm = sm / n;
  const double se_q = std::sqrt((sq2 / n - mq * mq) / n), se_m = std::sqrt((sm2 / n - mm * mm) / n);
  EXPECT_LE(std::fabs(mm - EM), 4 * se_m);
  // the piecewise log-linear integral carries an O(1/n_sub) bias
  EXPECT_LE(std::fabs(mq - EQ), 4 * se_q + 2e-3);
}

// Independent oracle: the same block moments from a direct fine-grid Euler walk.
TEST(SimulateBlock, GbmQuadratureAgreesWithFineGridWalk) {
  const Model m = gbm_model(-1.0, claim::Constant{1.0}, 0.3, 0.2, arrival::Deterministic{1.0});
  const PathEngine e(m, policy(16));
  const int n = 100'000, fine = 256;
  double a = 0, b = 0, a2 = 0, b2 = 0;
  BlockPath path;
  for (int i = 0; i < n; ++i) {
    Rng r1(5, Stream::Block, i);
    a += e.simulate_block(false, r1, path).Q;
    a2 += path.qm.Q * path.qm.Q;
    Rng r2(6, Stream::Synthetic, i);
    double v = 0, integral = 0;
    const double dt = 1.0 / fine;
    for (int k = 0; k < fine; ++k) {
      const double v_next = v + 0.2 * dt + std::sqrt(0.2 * dt) * r2.normal();
      integral += 0.5 * dt * (std::exp(-v) + std::exp(-v_next));
      v = v_next;
    }
    const double q = integral - std::exp(-v);
    b += q;
    b2 += q * q;
  }
  a /= n;
  b /= n;
  const double se = std::sqrt((a2 / n - a * a) / n + (b2 / n - b * b) / n);
  EXPECT_LE(std::fabs(a - b), 4 * se + 1e-3);
}

TEST(RunTrial, DeterministicRuinAtLn2) {
  const PathEngine e(deterministic_model(), policy(1024));
  Rng rng(1, Stream::Trial, 0);
  const TrialResult r = e.run_trial(0.5, rng);
  ASSERT_TRUE(r.ruined());
  EXPECT_NEAR(r.ruin().tau, std::numbers::ln2, 1e-6);
  EXPECT_EQ(r.ruin().crossing, Crossing::Continuous);
  EXPECT_LE(std::fabs(r.ruin().x_at_tau), r.ruin().grid_gap);
  EXPECT_NEAR(r.ruin().clock_at_tau, r.ruin().tau, 1e-15);
}

TEST(RunTrial, DeterministicSurvival) {
  const PathEngine e(deterministic_model(), policy(64));
  Rng rng(1, Stream::Trial, 0);
  const TrialResult r = e.run_trial(0.7, rng);
  ASSERT_TRUE(r.survived());
  const auto& s = std::get<Survived>(r.outcome);
  const double yinf = (1 - 2 / kE) / (1 - 1 / kE);
  EXPECT_NEAR(s.y_final, yinf, 1e-11);
  EXPECT_NEAR(s.y_final, 0.418023, 1e-6);
  EXPECT_LT(s.a_final, 1e-12);
  EXPECT_NEAR(r.stats.sup_y, 1 - 1 / kE, 1e-9);
}

TEST(RunTrial, NonLifeDeterministicRuinsAtClaimEpoch) {
  const PathEngine e(deterministic_model(1.0, -3.0), policy());
  Rng rng(1, Stream::Trial, 0);
  const TrialResult r = e.run_trial(0.4, rng);
  ASSERT_TRUE(r.ruined());
  EXPECT_EQ(r.ruin().tau, 1.0);
  EXPECT_EQ(r.ruin().crossing, Crossing::Jump);
  EXPECT_GT(r.ruin().x_before, 0.0);
  EXPECT_LE(r.ruin().x_at_tau, 0.0);
  EXPECT_EQ(r.ruin().clock_at_tau, 0.0);
}

TEST(RunTrial, NonLifeRandomRuinsExactlyAtClaims) {
  const PathEngine e(gbm_model(0.5, claim::Exponential{-1, 1.0}), policy(16));
  int ruined = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    Rng rng(8, Stream::Trial, i);
    Recorder rec;
    const TrialResult r = e.run_trial(2.0, rng, rec);
    if (!r.ruined()) continue;
    ++ruined;
    EXPECT_EQ(r.ruin().crossing, Crossing::Jump);
    ASSERT_FALSE(rec.claims.empty());
    EXPECT_EQ(r.ruin().tau, rec.claims.back().t);
    EXPECT_GT(r.ruin().x_before, 0.0);
    for (std::size_t k = 0; k + 1 < rec.claims.size(); ++k) EXPECT_LT(rec.claims[k].y_after, 2.0);
  }
  EXPECT_GT(ruined, 10);
}

TEST(RunTrial, AnnuityCrossingsAreContinuousAndRefine) {
  const Model m = gbm_model(-1.0, claim::Exponential{1, 1.0});
  for (int n_sub : {16, 64}) {
    const PathEngine e(m, policy(n_sub));
    for (std::uint64_t i = 0; i < 300; ++i) {
      Rng rng(9, Stream::Trial, i);
      const TrialResult r = e.run_trial(3.0, rng);
      if (!r.ruined()) continue;
      EXPECT_EQ(r.ruin().crossing, Crossing::Continuous);
      EXPECT_LE(r.ruin().x_at_tau, 0.0);
      EXPECT_LE(std::fabs(r.ruin().x_at_tau), r.ruin().grid_gap + 1e-15);
      EXPECT_GT(r.ruin().clock_at_tau, 0.0);
    }
  }
}

TEST(RunTrial, RejectsNonPositiveCapital) {
  const PathEngine e(deterministic_model(), policy());
  Rng rng(1, Stream::Trial, 0);
  EXPECT_THROW(e.run_trial(0.0, rng), Error);
}

TEST(RunTrial, CensoringReasons) {
  SimPolicy p = policy(8);
  p.n_max_claims = 3;
  const Model m = gbm_model(-1.0, claim::Exponential{1, 1.0});
  Rng rng(1, Stream::Trial, 0);
  const TrialResult a = PathEngine(m, p).run_trial(1e6, rng);
  ASSERT_TRUE(a.censored());
  EXPECT_EQ(std::get<Censored>(a.outcome).reason, CensorReason::ClaimBudget);
  EXPECT_EQ(a.stats.claims, 3u);
  p = policy(8);
  p.t_max = 2.5;
  Rng rng2(1, Stream::Trial, 0);
  const TrialResult b = PathEngine(m, p).run_trial(1e6, rng2);
  ASSERT_TRUE(b.censored());
  EXPECT_EQ(std::get<Censored>(b.outcome).reason, CensorReason::Horizon);
}

TEST(RunTrial, InitialClockDrivesFirstBlock) {
  BusinessSpec b;
  b.c = -1.0;
  b.interarrival = arrival::Deterministic{2.0};
  b.claims = claim::Constant{1.0};
  b.r = 1.5;
  const Model m = make_model(linear_v(), b);
  Recorder rec;
  Rng rng(1, Stream::Trial, 0);
  PathEngine(m, policy(4)).run_trial(100.0, rng, rec);
  ASSERT_GE(rec.claims.size(), 3u);
  EXPECT_DOUBLE_EQ(rec.claims[0].t, 0.5);
  EXPECT_DOUBLE_EQ(rec.claims[1].t, 2.5);
  EXPECT_DOUBLE_EQ(rec.claims[2].t, 4.5);
}

// X on the node grid, rebuilt from dX = X_- dR + dP with V linear between nodes,
// against the closed form e^V (u - Y).
TEST(RunTrial, DualAccumulationIdentity) {
  for (const Model& m : {gbm_model(-1.0, claim::Exponential{1, 1.0}),
                         mixed_jump_model(-0.7, claim::ExpMixture{0.6, 1.0, 0.8})}) {
    const PathEngine e(m, policy(16));
    const double c = m.business.c, u = 4.0;
    for (std::uint64_t i = 0; i < 30; ++i) {
      Rng rng(10, Stream::Trial, i);
      Recorder rec;
      e.run_trial(u, rng, rec);
      double x = u, t = 0, v = 0;
      std::size_t ci = 0;
      double worst = 0;
      for (const auto& nd : rec.nodes) {
        const double dt = nd.t - t, dv = nd.v_pre - v;
        const double growth = std::fabs(dv) < 1e-12 ? dt * (1 + dv / 2) : dt * std::expm1(dv) / dv;
        x = std::exp(dv) * x + c * growth;
        x *= std::exp(nd.v_post - nd.v_pre);
        t = nd.t;
        v = nd.v_post;
        const double closed = std::exp(nd.v_post) * (u - nd.y);
        const double scale = std::exp(nd.v_post) * (u + std::fabs(nd.y));
        worst = std::max(worst, std::fabs(x - closed) / scale);
        if (nd.block_end && ci < rec.claims.size()) {
          x += rec.claims[ci].xi;
          const double after = std::exp(rec.claims[ci].v) * (u - rec.claims[ci].y_after);
          worst = std::max(worst, std::fabs(x - after) / (std::exp(rec.claims[ci].v) * (u + std::fabs(rec.claims[ci].y_after))));
          ++ci;
        }
      }
      EXPECT_LT(worst, 1e-9);
    }
  }
}

TEST(RunTrial, NestingInU) {
  const PathEngine e(mixed_jump_model(-1.0, claim::ExpMixture{0.7, 1.0, 0.5}), policy(16));
  const std::vector<double> us = {0.5, 1.0, 2.0, 4.0, 8.0};
  for (std::uint64_t i = 0; i < 50; ++i) {
    bool prev_ruined = true;
    double prev_tau = 0;
    for (double u : us) {
      Rng rng(11, Stream::Trial, i);
      const TrialResult r = e.run_trial(u, rng);
      EXPECT_TRUE(prev_ruined || !r.ruined());
      if (r.ruined()) {
        EXPECT_GE(r.ruin().tau, prev_tau);
        prev_tau = r.ruin().tau;
      }
      prev_ruined = r.ruined();
    }
  }
}

TEST(RunTrial, ScaleEquivariance) {
  const ClaimLaw claims = claim::ExpMixture{0.7, 1.0, 0.5};
  const Model base = mixed_jump_model(-1.0, claims);
  for (double k : {0.25, 2.0, 8.0}) {
    Model scaled_m = mixed_jump_model(-k, scaled(claims, k));
    const PathEngine e0(base, policy(16)), e1(scaled_m, policy(16));
    for (std::uint64_t i = 0; i < 50; ++i) {
      Rng r0(12, Stream::Trial, i), r1(12, Stream::Trial, i);
      const TrialResult a = e0.run_trial(2.0, r0), b = e1.run_trial(2.0 * k, r1);
      ASSERT_EQ(a.ruined(), b.ruined());
      if (a.ruined()) {
        EXPECT_EQ(a.ruin().tau, b.ruin().tau);
        EXPECT_EQ(a.ruin().crossing, b.ruin().crossing);
      }
      EXPECT_EQ(a.stats.sup_y * k, b.stats.sup_y);
    }
  }
}

TEST(SampleYinf, DeterministicGeometricSeries) {
  const PathEngine e(deterministic_model(), policy());
  Rng rng(1, Stream::Yinf, 0);
  const YinfSample s = e.sample_yinf(rng);
  const double yinf = (1 - 2 / kE) / (1 - 1 / kE);
  EXPECT_LE(std::fabs(s.value - yinf), 1e-12 / (1 - 1 / kE));
  EXPECT_EQ(s.blocks, 28u);  // first n with e^{-n} < 1e-12
}

TEST(SampleYinf, ZeroDriftNonLife) {
  const PathEngine e(deterministic_model(0.0, -1.0), policy());
  Rng rng(1, Stream::Yinf, 0);
  const double y = e.sample_yinf(rng).value;
  EXPECT_NEAR(y, (1 / kE) / (1 - 1 / kE), 1e-11);
  EXPECT_NEAR(y, 0.581977, 1e-6);
}

TEST(SampleYinf, CensoredWhenBudgetTooSmall) {
  SimPolicy p = policy();
  p.n_max_claims = 5;
  const PathEngine e(deterministic_model(), p);
  Rng rng(1, Stream::Yinf, 0);
  EXPECT_FALSE(e.try_sample_yinf(rng));
  try {
    Rng rng2(1, Stream::Yinf, 0);
    e.sample_yinf(rng2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::CensoredSample);
  }
}

TEST(SampleYinf, DeeperTruncationMovesQuantilesNegligibly) {
  const Model m = gbm_model(-1.0, claim::Exponential{1, 1.0});
  SimPolicy shallow = policy(8), deep = policy(8);
  deep.eps_A = shallow.eps_A * shallow.eps_A;
  const PathEngine e0(m, shallow), e1(m, deep);
  const int n = 5000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    Rng r0(13, Stream::Yinf, i), r1(13, Stream::Yinf, i);
    const YinfSample s0 = e0.sample_yinf(r0), s1 = e1.sample_yinf(r1);
    a[i] = s0.value;
    b[i] = s1.value;
    EXPECT_GE(s1.blocks, s0.blocks);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (double p : {0.1, 0.5, 0.9, 0.99}) {
    const auto k = static_cast<std::size_t>(p * n);
    EXPECT_LT(std::fabs(a[k] - b[k]), 1e-6) << p;
  }
}

TEST(Memorylessness, ExponentialFirstBlockIgnoresClock) {
  Model m = gbm_model(-1.0, claim::Exponential{1, 1.0});
  Model delayed = m;
  delayed.business.r = 3.0;
  const PathEngine e0(m, policy(1)), e1(delayed, policy(1));
  const int n = 20'000;
  std::vector<double> a(n), b(n);
  BlockPath path;
  for (int i = 0; i < n; ++i) {
    Rng r0(14, Stream::Block, i), r1(15, Stream::Block, i);
    a[i] = (e0.simulate_block(false, r0, path), path.length);
    b[i] = (e1.simulate_block(true, r1, path), path.length);
  }
  EXPECT_GT(ks_two_sample(a, b).p_value, 0.01);
}

TEST(Memorylessness, NonExponentialFirstBlockIsShorter) {
  BusinessSpec bs;
  bs.c = -1.0;
  bs.interarrival = arrival::UniformShifted{0.0, 2.0};
  bs.claims = claim::Constant{1.0};
  bs.r = 1.0;
  LevyTriplet t;
  t.sigma2 = 0.1;
  t.a = 0.2;
  const PathEngine e(make_model(t, bs), policy(1));
  BlockPath path;
  for (int i = 0; i < 1000; ++i) {
    Rng rng(16, Stream::Block, i);
    e.simulate_block(true, rng, path);
    EXPECT_LE(path.length, 1.0);
  }
}
