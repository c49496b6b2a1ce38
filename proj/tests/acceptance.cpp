#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ruinlab/ruinlab.hpp"

using namespace ruinlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates sub-checks; the first failures are kept in the detail line.
struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!ok || notes.size() < 8) notes.push_back((ok ? "" : "FAILED ") + what);
  }
  Outcome done() const {
    std::string d;
    for (const auto& n : notes) d += (d.empty() ? "" : "; ") + n;
    return {pass, d};
  }
};

std::string fmt(double x, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

ExperimentConfig scenario(const std::string& name) {
  const auto cat = scenario_catalog();
  const Scenario* s = find_scenario(cat, name);
  if (!s) fail(ErrorKind::Config, "missing scenario " + name);
  return s->config;
}

SimPolicy policy_with(const ExperimentConfig& c, int n_sub) {
  SimPolicy p = sim_policy(c.run);
  p.n_sub = n_sub;
  return p;
}

Outcome beta_closed_form() {
  Verdict v;
  for (auto [a, s2] : {std::pair{0.3, 0.2}, {0.2, 0.2}, {0.4, 0.1}}) {
    LevyTriplet t;
    t.a = a;
    t.sigma2 = s2;
    const double oracle = 2 * a / s2 - 1;
    const double beta = solve_beta(t).beta;
    v.check(std::fabs(beta - oracle) <= 1e-10, "a=" + fmt(a) + " s2=" + fmt(s2) + ": " + fmt(beta, 15) + " vs " +
                                                    fmt(oracle, 15));
  }
  return v.done();
}

Outcome unit_mean() {
  Verdict v;
  for (const char* name : {"annuity-gbm-beta1", "mixed-jumps-2a"}) {
    const ExperimentConfig c = scenario(name);
    const Model m = make_model(c);
    const double beta = solve_beta(m).beta;
    const UnitMeanReport r = verify_unit_mean(m, beta, 1'000'000, 2024, 1, sim_policy(c.run));
    const double z = (r.m_beta.mean - 1.0) / r.m_beta.std_error;
    v.check(std::fabs(z) <= 4.0, std::string(name) + ": beta=" + fmt(beta) + " mean=" + fmt(r.m_beta.mean, 8) +
                                     " z=" + fmt(z, 3));
  }
  return v.done();
}

Outcome deterministic_oracle() {
  Verdict v;
  const ExperimentConfig c = scenario("deterministic-oracle");
  const Model m = make_model(c);
  const double e1 = std::exp(-1.0);
  const double y_inf = (1 - 2 * e1) / (1 - e1);
  {
    const PathEngine eng(m, policy_with(c, 64));
    Rng rng(1, Stream::Yinf, 0);
    const YinfSample s = eng.sample_yinf(rng);
    const double bound = c.run.eps_A * y_inf * 4 + 1e-15;
    v.check(std::fabs(s.value - y_inf) <= bound, "Y_inf=" + fmt(s.value, 15) + " err=" + fmt(s.value - y_inf, 3));
  }
  const PathEngine fine(m, policy_with(c, 1024));
  Rng r1(1, Stream::Trial, 0);
  const TrialResult hit = fine.run_trial(0.5, r1);
  v.check(hit.ruined() && std::fabs(hit.ruin().tau - std::numbers::ln2) <= 1e-6,
          "tau(0.5)=" + (hit.ruined() ? fmt(hit.ruin().tau, 12) : std::string("none")));
  Rng r2(1, Stream::Trial, 0);
  const TrialResult miss = fine.run_trial(0.7, r2);
  v.check(miss.survived(), "survives at u=0.7");
  v.check(std::fabs(miss.stats.sup_y - (1 - e1)) <= 1e-9, "sup Y=" + fmt(miss.stats.sup_y, 12));
  return v.done();
}

Outcome sandwich() {
  Verdict v;
  const ExperimentConfig c = scenario("annuity-gbm-beta1");
  const Model m = make_model(c);
  const std::vector<double> u = {1, 2, 5, 10, 20};
  const SandwichReport rep =
      sandwich_check(m, u, policy_with(c, 16), {100'000, 41, 1}, {100'000, 42, 1}, default_r_grid(m));
  for (const auto& row : rep.rows)
    v.check(row.lower_ok && row.upper == CheckStatus::Pass,
            "u=" + fmt(row.u) + " Gbar<=" + fmt(row.gbar_low, 4) + " Psi in [" + fmt(row.psi_low_low, 4) + "," +
                fmt(row.psi_high_high, 4) + "] upper " + fmt(row.upper_bound, 4));
  v.check(rep.gbar.gstar.g_star_low > 0, "Gbar_* low end " + fmt(rep.gbar.gstar.g_star_low, 4));
  return v.done();
}

Outcome power_law() {
  Verdict v;
  const ExperimentConfig c = scenario("annuity-gbm-beta1");
  const Model m = make_model(c);
  const std::vector<double> u = {5, 10, 20, 50, 100};
  const auto est = estimate_ruin_grid(m, u, policy_with(c, 32), {1'000'000, 51, 1});
  std::vector<double> lo, hi;
  for (const auto& e : est) {
    lo.push_back(e.p_low);
    hi.push_back(e.p_high);
  }
  const TailReport t = tail_report(u, lo, hi, 1.0);
  v.check(t.low.slope_ok && t.high.slope_ok,
          "slope low=" + fmt(t.low.fit.slope, 4) + " high=" + fmt(t.high.fit.slope, 4));
  v.check(t.low.flat_ok && t.high.flat_ok,
          "flatness low=" + fmt(t.low.flatness, 4) + " high=" + fmt(t.high.flatness, 4));
  std::string up;
  for (std::size_t i = 0; i < u.size(); ++i) up += (i ? "," : "") + fmt(u[i] * lo[i], 4);
  v.notes.push_back("u*p=" + up);
  return v.done();
}

Outcome fixed_point() {
  Verdict v;
  for (const char* name : {"annuity-gbm-beta1", "nonlife-gbm-1", "mixed-jumps-2a"}) {
    const ExperimentConfig c = scenario(name);
    const FixedPointReport r = fixed_point_check(make_model(c), policy_with(c, 16), {100'000, 61, 1});
    v.check(r.pass && !r.flagged, std::string(name) + ": D=" + fmt(r.ks.statistic, 4) + " p=" + fmt(r.ks.p_value, 3));
  }
  return v.done();
}

struct ClaimTimes {
  std::vector<double> t;
  void on_node(const NodeEvent&) {}
  void on_claim(const ClaimEvent& e) { t.push_back(e.t); }
};

Outcome crossing_semantics() {
  Verdict v;
  const std::uint64_t want = 10'000;
  {
    const ExperimentConfig c = scenario("annuity-gbm-beta1");
    const Model m = make_model(c);
    double tol[2] = {0, 0};
    int k = 0;
    for (int n_sub : {64, 128}) {
      const PathEngine eng(m, policy_with(c, n_sub));
      std::uint64_t ruined = 0, bad = 0;
      double gap_sum = 0;
      for (std::uint64_t i = 0; ruined < want && i < 100 * want; ++i) {
        Rng rng(71, Stream::Trial, i);
        const TrialResult r = eng.run_trial(1.0, rng);
        if (!r.ruined()) continue;
        ++ruined;
        const Ruined& x = r.ruin();
        bad += x.crossing != Crossing::Continuous || !(std::fabs(x.x_at_tau) <= x.grid_gap);
        gap_sum += x.grid_gap;
      }
      tol[k++] = gap_sum / static_cast<double>(ruined);
      v.check(ruined == want && bad == 0, "annuity n_sub=" + std::to_string(n_sub) + ": " + std::to_string(bad) +
                                              " of " + std::to_string(ruined) + " outside tol, tol=" + fmt(tol[k - 1], 4));
    }
    v.check(tol[1] <= 0.6 * tol[0], "tol ratio " + fmt(tol[1] / tol[0], 4));
  }
  {
    const ExperimentConfig c = scenario("nonlife-gbm-1");
    const PathEngine eng(make_model(c), sim_policy(c.run));
    std::uint64_t ruined = 0, bad = 0;
    for (std::uint64_t i = 0; ruined < want && i < 100 * want; ++i) {
      Rng rng(72, Stream::Trial, i);
      ClaimTimes ct;
      const TrialResult r = eng.run_trial(1.0, rng, ct);
      if (!r.ruined()) continue;
      ++ruined;
      bad += r.ruin().crossing != Crossing::Jump || ct.t.empty() || r.ruin().tau != ct.t.back();
    }
    v.check(ruined == want && bad == 0,
            "non-life: " + std::to_string(bad) + " of " + std::to_string(ruined) + " off a claim epoch");
  }
  return v.done();
}

Outcome pathwise() {
  Verdict v;
  for (const char* name : {"annuity-gbm-beta1", "mixed-gbm-1", "mixed-jumps-2a", "nonlife-gbm-1"}) {
    const ExperimentConfig c = scenario(name);
    const Model m = make_model(c);
    const SimPolicy p = policy_with(c, 16);
    const PathEngine eng(m, p);
    double worst = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(81, Stream::Trial, i);
      worst = std::max(worst, dual_accumulation_error(eng, 4.0, rng));
    }
    const std::vector<double> us = {0.5, 1, 2, 4, 8};
    const InvariantCount nest = check_nesting(eng, us, 82, 100);
    std::uint64_t scale_bad = 0;
    for (double k : {0.25, 2.0, 8.0}) scale_bad += check_scale(m, p, k, 2.0, 83, 100).violations;
    v.check(worst <= 1e-9 && nest.pass() && scale_bad == 0,
            std::string(name) + ": identity " + fmt(worst, 3) + ", nesting " + std::to_string(nest.violations) +
                ", scale " + std::to_string(scale_bad));
  }
  return v.done();
}

Outcome memorylessness() {
  Verdict v;
  {
    const ExperimentConfig c = scenario("annuity-gbm-beta1");
    Model fresh = make_model(c), delayed = fresh;
    delayed.business.r = 3.0;
    const PathEngine e0(fresh, policy_with(c, 1)), e1(delayed, policy_with(c, 1));
    const int n = 50'000;
    std::vector<double> a(n), b(n);
    BlockPath path;
    for (int i = 0; i < n; ++i) {
      Rng r0(91, Stream::Block, i), r1(92, Stream::Block, i);
      e0.simulate_block(false, r0, path);
      a[i] = path.length;
      e1.simulate_block(true, r1, path);
      b[i] = path.length;
    }
    const KsResult ks = ks_two_sample(a, b);
    v.check(ks.p_value > 0.01, "exponential residual KS p=" + fmt(ks.p_value, 3));
  }
  std::uint64_t points = 0, mismatches = 0;
  const std::vector<double> rs = {0.0, 0.25, 0.5, 0.75, 0.9}, ts = {0.0, 0.05, 0.1, 0.25, 0.4, 0.5, 0.75, 1.0, 1.2};
  for (double r : rs) {
    const InterarrivalLaw det = residual_law(arrival::Deterministic{1.0}, r);
    const InterarrivalLaw uni = residual_law(arrival::UniformShifted{0.5, 1.5}, r);
    for (double t : ts) {
      const double det_cf = t >= 1.0 - r ? 1.0 : 0.0;
      const double lo = std::max(0.5 - r, 0.0), hi = 1.5 - r;
      const double uni_cf = std::clamp((t - lo) / (hi - lo), 0.0, 1.0);
      points += 2;
      mismatches += cdf(det, t) != det_cf;
      mismatches += cdf(uni, t) != uni_cf;
    }
  }
  v.check(mismatches == 0, "deterministic/uniform residual cdf: " + std::to_string(mismatches) + " of " +
                               std::to_string(points) + " grid points differ");
  return v.done();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Concatenated contents of every file in a directory, in name order.
std::string dir_bytes(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + "\n" + slurp(f);
  return all;
}

Outcome reproducibility() {
  Verdict v;
  const char* bin = std::getenv("RUINLAB_BIN");
  if (!bin) return {false, "RUINLAB_BIN not set"};
  const fs::path root = fs::temp_directory_path() / "ruinlab_acceptance_repro";
  fs::remove_all(root);
  fs::create_directories(root);
  ExperimentConfig c = scenario("annuity-gbm-beta1");
  c.run.n_trials = 4000;
  c.run.n_yinf = 2000;
  c.run.n_sub = 16;
  std::ofstream(root / "config.json", std::ios::binary) << serialize(c);
  for (const char* cmd : {"beta", "ruin", "yinf", "tail", "validate"}) {
    std::string ref;
    bool same = true;
    for (int threads : {1, 4, 8}) {
      const fs::path out = root / (std::string(cmd) + "_" + std::to_string(threads));
      const std::string line = std::string(bin) + " " + cmd + " --config " + (root / "config.json").string() +
                               " --out " + out.string() + " --seed 7 --threads " + std::to_string(threads) +
                               " --no-timestamp > " + (root / "stdout").string() + " 2>&1";
      const int status = std::system(line.c_str());
      const std::string bytes = dir_bytes(out) + "stdout\n" + slurp(root / "stdout") + std::to_string(status);
      if (ref.empty()) ref = bytes;
      else same = same && bytes == ref;
    }
    v.check(same, std::string(cmd) + (same ? " identical" : " differs") + " across 1/4/8 threads");
  }
  fs::remove_all(root);
  return v.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"beta closed form", beta_closed_form},
      {"unit mean E[M^beta] = 1", unit_mean},
      {"deterministic oracle", deterministic_oracle},
      {"sandwich bound", sandwich},
      {"power-law decay", power_law},
      {"fixed-point KS", fixed_point},
      {"crossing semantics", crossing_semantics},
      {"pathwise identity and couplings", pathwise},
      {"memorylessness", memorylessness},
      {"thread reproducibility", reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s  %2zu  %-32s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
