#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beta_solver.hpp"
#include "config.hpp"
#include "invariants.hpp"
#include "ruin_mc.hpp"
#include "scenarios.hpp"
#include "tail_stats.hpp"

namespace ruinlab::cli {

enum Exit : int { kOk = 0, kInvalid = 2, kInconclusive = 3 };

using ojson = nlohmann::ordered_json;

inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool no_timestamp = false;
};

// Writes report files into one directory. Files never carry wall times or the
// thread count, so the same seed gives the same bytes.
class Sink {
 public:
  Sink(std::filesystem::path dir, bool stamp) : dir_(std::move(dir)), stamp_(stamp) {
    std::filesystem::create_directories(dir_);
    if (stamp_) ts_ = utc_now();
  }

  void csv(const std::string& name, const std::string& header, const std::vector<std::vector<std::string>>& rows) {
    std::string s;
    if (stamp_) s += "# generated " + ts_ + "\n";
    s += header + "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) s += ',';
        s += quote(r[i]);
      }
      s += '\n';
    }
    write(name, s);
  }

  void json(const std::string& name, ojson j) {
    if (stamp_) j["generated"] = ts_;
    write(name, j.dump(2) + "\n");
  }

  const std::filesystem::path& dir() const { return dir_; }

 private:
  static std::string quote(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) fail(ErrorKind::Config, "cannot write " + path.string());
  }

  std::filesystem::path dir_;
  bool stamp_;
  std::string ts_;
};

struct Context {
  ExperimentConfig cfg;
  Model model;
  SimPolicy policy;
  std::optional<ConditionTag> tag;
  Sink sink;
  std::ostream& out;
};

inline ojson header(const Context& c, const char* command) {
  ojson cfg = to_json(c.cfg);
  cfg["run"].erase("threads");
  ojson j = {{"command", command}, {"config", cfg}};
  if (c.model.log_law.approximate) {
    j["approximate"] = true;
    j["folded_variance"] = c.model.log_law.folded_variance;
  }
  return j;
}

inline RunSettings run_settings(const Context& c, std::uint64_t n, std::uint64_t tag = 0) {
  return {n, tag ? derive_seed(c.cfg.run.seed, tag) : c.cfg.run.seed, c.cfg.run.threads};
}

inline ojson ci_json(ProportionCI ci) { return ojson::array({ci.lo, ci.hi}); }

inline std::vector<std::vector<std::string>> ruin_rows(const std::vector<RuinEstimate>& est) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : est)
    rows.push_back({num(e.u), num(e.r), std::to_string(e.n_trials), std::to_string(e.k_ruined),
                    std::to_string(e.k_censored), num(e.p_low), num(e.ci_low.lo), num(e.ci_low.hi), num(e.p_high),
                    num(e.ci_high.lo), num(e.ci_high.hi), std::to_string(e.seed)});
  return rows;
}

inline const char* kRuinHeader =
    "u,r,n,k_ruin,k_cens,p_low,p_low_ci_lo,p_low_ci_hi,p_high,p_high_ci_lo,p_high_ci_hi,seed";

inline double max_censored(const std::vector<RuinEstimate>& est) {
  double m = 0;
  for (const auto& e : est) m = std::max(m, static_cast<double>(e.k_censored) / static_cast<double>(e.n_trials));
  return m;
}

inline ojson ruin_json(const std::vector<RuinEstimate>& est) {
  ojson rows = ojson::array();
  for (const auto& e : est)
    rows.push_back({{"u", e.u},
                    {"r", e.r},
                    {"n", e.n_trials},
                    {"k_ruin", e.k_ruined},
                    {"k_cens", e.k_censored},
                    {"p_low", e.p_low},
                    {"p_low_ci", ci_json(e.ci_low)},
                    {"p_high", e.p_high},
                    {"p_high_ci", ci_json(e.ci_high)}});
  return rows;
}

inline int cmd_beta(Context& c) {
  ojson j = header(c, "beta");
  const StandingReport st = check_standing_assumption(c.model);
  ojson checks = ojson::array();
  for (const auto& it : st.checks) checks.push_back({{"name", it.name}, {"pass", it.pass}, {"detail", it.detail}});
  j["standing"] = checks;
  if (!st.beta) {
    j["status"] = "invalid";
    c.sink.json("beta.json", j);
    c.out << "beta: no admissible root (" << st.find("positive_root")->detail << ")\n";
    return kInvalid;
  }
  const BetaResult& b = *st.beta;
  j["beta"] = b.beta;
  j["domain"] = ojson::array({b.domain.lo, b.domain.hi});
  j["margin"] = b.margin;
  j["residual"] = b.residual;
  j["iterations"] = b.iterations;
  j["bracket"] = ojson::array({b.bracket_lo, b.bracket_hi});
  j["status"] = st.pass() ? "ok" : "invalid";
  c.sink.json("beta.json", j);

  std::vector<std::vector<std::string>> rows;
  const double top = std::min(2.0 * b.beta, std::isfinite(b.domain.hi) ? b.domain.hi * (1 - 1e-6) : kInf);
  const double s_max = mgf_upper(c.model.business.interarrival);
  for (int i = 1; i <= 64; ++i) {
    const double q = top * i / 64.0;
    const double psi = levy_exponent(c.model.log_law, q);
    const double H = psi < s_max ? cumulant_H(c.model.log_law, c.model.business.interarrival, q) : kInf;
    rows.push_back({num(q), num(psi), num(H)});
  }
  c.sink.csv("psi.csv", "q,psi,H", rows);
  c.out << "beta = " << num(b.beta) << " (residual " << num(b.residual) << ", " << b.iterations << " iterations"
        << (c.model.log_law.approximate ? ", approximate" : "") << ")\n";
  return st.pass() ? kOk : kInvalid;
}

inline int cmd_ruin(Context& c) {
  const auto est = estimate_ruin_grid(c.model, c.cfg.run.u_grid, c.policy, run_settings(c, c.cfg.run.n_trials));
  const double cens = max_censored(est);
  const bool inconclusive = cens > 0.01;
  ojson j = header(c, "ruin");
  j["rows"] = ruin_json(est);
  j["max_censored_fraction"] = cens;
  j["status"] = inconclusive ? "inconclusive" : "ok";
  c.sink.csv("ruin.csv", kRuinHeader, ruin_rows(est));
  c.sink.json("ruin.json", j);
  c.out << "ruin: " << est.size() << " levels, n = " << c.cfg.run.n_trials << ", p_low(u=" << num(est.front().u)
        << ") = " << num(est.front().p_low) << ", max censored " << num(cens) << (inconclusive ? " (inconclusive)" : "")
        << "\n";
  return inconclusive ? kInconclusive : kOk;
}

inline int cmd_yinf(Context& c) {
  const auto r_grid = r_grid_of(c.cfg, c.model);
  const GbarEstimate g =
      estimate_Gbar(c.model, c.cfg.run.u_grid, c.model.business.r, c.policy, run_settings(c, c.cfg.run.n_yinf),
                    r_grid);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < g.u_grid.size(); ++i)
    rows.push_back({num(g.u_grid[i]), std::to_string(g.k_above[i]), num(g.gbar[i]), num(g.ci[i].lo), num(g.ci[i].hi)});
  c.sink.csv("gbar.csv", "u,k_above,gbar,ci_lo,ci_hi", rows);

  rows.clear();
  for (std::size_t i = 0; i < g.gstar.r_grid.size(); ++i)
    rows.push_back({num(g.gstar.r_grid[i]), num(g.gstar.gbar0[i]), num(g.gstar.gbar0_ci[i].lo),
                    num(g.gstar.gbar0_ci[i].hi)});
  c.sink.csv("gstar.csv", "r,gbar0,ci_lo,ci_hi", rows);

  std::vector<double> sorted = g.samples;
  std::sort(sorted.begin(), sorted.end());
  rows.clear();
  ojson quant = ojson::object();
  if (!sorted.empty()) {
    for (double p : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) {
      const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size()))) - 1;
      const double q = sorted[std::min(k, sorted.size() - 1)];
      rows.push_back({num(p), num(q)});
      quant[num(p)] = q;
    }
  }
  c.sink.csv("yinf_quantiles.csv", "p,quantile", rows);

  const double cens = g.n ? static_cast<double>(g.n_censored) / static_cast<double>(g.n + g.n_censored) : 1.0;
  const bool inconclusive = g.flagged || g.gstar.flagged || !(g.gstar.g_star_low > 0);
  ojson j = header(c, "yinf");
  j["n_completed"] = g.n;
  j["n_censored"] = g.n_censored;
  j["quantiles"] = quant;
  j["g_star"] = g.gstar.g_star;
  j["g_star_ci"] = ojson::array({g.gstar.g_star_low, g.gstar.g_star_high});
  j["g_star_argmin_r"] = g.gstar.argmin_r;
  j["r_skipped"] = g.gstar.r_skipped;
  j["status"] = inconclusive ? "inconclusive" : "ok";
  c.sink.json("yinf.json", j);
  c.out << "yinf: " << g.n << " samples, median " << (sorted.empty() ? "n/a" : num(sorted[sorted.size() / 2]))
        << ", Gbar_* = " << num(g.gstar.g_star) << ", censored " << num(cens)
        << (inconclusive ? " (inconclusive)" : "") << "\n";
  return inconclusive ? kInconclusive : kOk;
}

inline ojson side_json(const TailSide& s) {
  return {{"slope", s.fit.slope},     {"slope_se", s.fit.std_error}, {"intercept", s.fit.intercept},
          {"flatness", s.flatness},   {"slope_ok", s.slope_ok},      {"flat_ok", s.flat_ok}};
}

inline int cmd_tail(Context& c) {
  const double beta = solve_beta(c.model).beta;
  const auto est = estimate_ruin_grid(c.model, c.cfg.run.u_grid, c.policy, run_settings(c, c.cfg.run.n_trials));
  c.sink.csv("ruin.csv", kRuinHeader, ruin_rows(est));
  std::vector<double> u, lo, hi;
  for (const auto& e : est) {
    u.push_back(e.u);
    lo.push_back(e.p_low);
    hi.push_back(e.p_high);
  }
  ojson j = header(c, "tail");
  j["beta"] = beta;
  j["rows"] = ruin_json(est);
  const double cens = max_censored(est);
  j["max_censored_fraction"] = cens;

  std::vector<std::size_t> order(u.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return u[a] < u[b]; });
  std::vector<double> us, los, his;
  for (auto i : order) {
    us.push_back(u[i]);
    los.push_back(lo[i]);
    his.push_back(hi[i]);
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < us.size(); ++i)
    rows.push_back({num(us[i]), num(los[i]), num(his[i]), num(std::pow(us[i], beta) * los[i]),
                    num(std::pow(us[i], beta) * his[i])});
  c.sink.csv("tail.csv", "u,p_low,p_high,u_beta_p_low,u_beta_p_high", rows);

  const YinfBatch yb = sample_yinf_batch(c.model, c.policy, run_settings(c, c.cfg.run.n_yinf, 21));
  int code = kOk;
  try {
    const TailReport t = tail_report(us, los, his, beta, yb.values);
    j["low"] = side_json(t.low);
    j["high"] = side_json(t.high);
    j["slope_tolerance"] = t.slope_tolerance;
    j["flatness_limit"] = t.flatness_limit;
    if (t.hill) j["hill"] = {{"k", t.hill->k}, {"alpha", t.hill->alpha}};
    ojson sens = ojson::array();
    for (const auto& h : t.hill_sensitivity) sens.push_back({{"k", h.k}, {"alpha", h.alpha}});
    j["hill_sensitivity"] = sens;
    j["verdict"] = t.verdict;
    if (!t.verdict || cens > 0.01) code = kInconclusive;
    c.out << "tail: beta = " << num(beta) << ", slope(low) = " << num(t.low.fit.slope) << ", slope(high) = "
          << num(t.high.fit.slope) << ", flatness = " << num(std::max(t.low.flatness, t.high.flatness))
          << (code == kOk ? "" : " (inconclusive)") << "\n";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateInput && e.kind() != ErrorKind::Precondition) throw;
    j["verdict"] = false;
    j["note"] = e.what();
    code = kInconclusive;
    c.out << "tail: inconclusive (" << e.what() << ")\n";
  }
  j["status"] = code == kOk ? "ok" : "inconclusive";
  c.sink.json("tail.json", j);
  return code;
}

struct ValidationItem {
  std::string name;
  CheckStatus status;
  std::string detail;
};

inline std::vector<ValidationItem> run_validation(const Context& c) {
  std::vector<ValidationItem> items;
  auto add = [&](std::string name, CheckStatus s, std::string d) { items.push_back({std::move(name), s, std::move(d)}); };
  auto pf = [](bool ok) { return ok ? CheckStatus::Pass : CheckStatus::Fail; };
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      add(name, CheckStatus::Fail, std::string(to_string(e.kind())) + ": " + e.what());
    }
  };
  const RunConfig& run = c.cfg.run;
  const std::uint64_t n_big = std::max<std::uint64_t>(run.n_yinf, 10'000);

  const StandingReport st = check_standing_assumption(c.model);
  for (const auto& it : st.checks) add("standing." + it.name, pf(it.pass), it.detail);
  if (c.tag)
    for (const auto& it : check_condition(c.cfg, *c.tag))
      add("condition." + it.name, pf(it.pass), to_string(*c.tag) + ": " + it.detail);

  const auto r_grid = r_grid_of(c.cfg, c.model);
  guarded("delay_dominance", [&] {
    const auto& f = c.model.business.interarrival;
    const double top = std::isfinite(support_upper(f)) ? support_upper(f) : 10.0 * mean(f);
    std::vector<double> t;
    for (int i = 1; i <= 64; ++i) t.push_back(top * i / 64.0);
    const DelayDominanceReport d = validate_delay_dominance(f, r_grid, t);
    add("delay_dominance", pf(d.pass), "worst F - F^r = " + num(d.worst_gap) + " on " +
                                           std::to_string(d.points_checked) + " points");
  });
  if (st.beta) {
    guarded("unit_mean", [&] {
      const UnitMeanReport u = verify_unit_mean(c.model, st.beta->beta, n_big, derive_seed(run.seed, 11), run.threads,
                                                c.policy);
      add("unit_mean", pf(u.within_4se), "E[M^beta] = " + num(u.m_beta.mean) + " +- " + num(u.m_beta.std_error));
    });
  }
  guarded("sandwich", [&] {
    const SandwichReport s = sandwich_check(c.model, run.u_grid, c.policy, run_settings(c, run.n_trials),
                                            run_settings(c, run.n_yinf, 12), r_grid);
    std::string d;
    for (const auto& row : s.rows) {
      if (!d.empty()) d += "; ";
      d += "u=" + num(row.u) + (row.lower_ok ? " lower ok" : " lower FAIL") + ", upper " + to_string(row.upper);
    }
    add("sandwich", s.status, d);
    const double cens = max_censored(s.ruin);
    add("ruin_censoring", cens <= 0.01 ? CheckStatus::Pass : CheckStatus::Inconclusive,
        "max censored fraction " + num(cens));
  });
  guarded("fixed_point", [&] {
    const FixedPointReport f = fixed_point_check(c.model, c.policy, {n_big, derive_seed(run.seed, 13), run.threads});
    add("fixed_point", f.flagged ? CheckStatus::Inconclusive : pf(f.pass),
        "KS D = " + num(f.ks.statistic) + ", p = " + num(f.ks.p_value));
  });

  std::vector<double> us = run.u_grid;
  std::sort(us.begin(), us.end());
  const double u_mid = us[us.size() / 2];
  const PathEngine engine(c.model, c.policy);
  const std::uint64_t path_seed = derive_seed(run.seed, 14);
  guarded("dual_accumulation", [&] {
    double worst = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(path_seed, Stream::Trial, i);
      worst = std::max(worst, dual_accumulation_error(engine, u_mid, rng));
    }
    add("dual_accumulation", pf(worst <= 1e-9), "worst relative gap " + num(worst));
  });
  guarded("nesting", [&] {
    const InvariantCount n = check_nesting(engine, us, path_seed, 100);
    add("nesting", pf(n.pass()), std::to_string(n.violations) + " of " + std::to_string(n.paths) + " paths violate");
  });
  guarded("scale", [&] {
    std::uint64_t bad = 0, paths = 0;
    for (double k : {0.5, 2.0}) {
      const InvariantCount s = check_scale(c.model, c.policy, k, us.front(), path_seed, 100);
      bad += s.violations;
      paths += s.paths;
    }
    add("scale", pf(bad == 0), std::to_string(bad) + " of " + std::to_string(paths) + " paths violate");
  });
  guarded("thread_reproducibility", [&] {
    const std::uint64_t n = std::min<std::uint64_t>(run.n_trials, 2000);
    const RunSettings one{n, run.seed, 1}, many{n, run.seed, 4};
    const bool same = same_counts(estimate_ruin_grid(c.model, us, c.policy, one),
                                  estimate_ruin_grid(c.model, us, c.policy, many));
    add("thread_reproducibility", pf(same), "1 vs 4 threads on " + std::to_string(n) + " trials");
  });
  return items;
}

inline int cmd_validate(Context& c) {
  const auto items = run_validation(c);
  std::vector<std::vector<std::string>> rows;
  ojson arr = ojson::array();
  int fails = 0, inconclusive = 0;
  for (const auto& it : items) {
    rows.push_back({it.name, to_string(it.status), it.detail});
    arr.push_back({{"name", it.name}, {"status", to_string(it.status)}, {"detail", it.detail}});
    fails += it.status == CheckStatus::Fail;
    inconclusive += it.status == CheckStatus::Inconclusive;
  }
  c.sink.csv("validate.csv", "check,status,detail", rows);
  ojson j = header(c, "validate");
  if (c.tag) j["tag"] = to_string(*c.tag);
  j["checks"] = arr;
  j["status"] = fails ? "fail" : inconclusive ? "inconclusive" : "pass";
  c.sink.json("validate.json", j);
  c.out << "validate: " << items.size() - fails - inconclusive << " pass, " << fails << " fail, " << inconclusive
        << " inconclusive\n";
  return fails ? kInvalid : inconclusive ? kInconclusive : kOk;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Config, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::optional<ConditionTag> catalog_tag(const ExperimentConfig& cfg) {
  const auto cat = scenario_catalog();
  const Scenario* s = find_scenario(cat, cfg.name);
  if (s && s->config.investment == cfg.investment && s->config.business == cfg.business) return s->tag;
  return std::nullopt;
}

inline int dispatch(const std::string& command, ExperimentConfig cfg, const RunFlags& flags,
                    std::optional<ConditionTag> tag, std::ostream& out) {
  if (flags.seed) cfg.run.seed = *flags.seed;
  if (flags.threads) cfg.run.threads = *flags.threads;
  Context c{cfg, make_model(cfg), sim_policy(cfg.run), tag, Sink(flags.out_dir, !flags.no_timestamp), out};
  if (command == "beta") return cmd_beta(c);
  if (command == "ruin") return cmd_ruin(c);
  if (command == "yinf") return cmd_yinf(c);
  if (command == "tail") return cmd_tail(c);
  return cmd_validate(c);
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ruinlab: ruin probabilities for Sparre Andersen models with risky investments"};
  app.require_subcommand(1);
  RunFlags flags;
  std::string selected;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--out", flags.out_dir, "output directory")->required();
    sub->add_option("--seed", flags.seed, "override run.seed");
    sub->add_option("--threads", flags.threads, "override run.threads")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--no-timestamp", flags.no_timestamp, "omit the generated-at line");
  };
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"beta", "solve for the tail exponent and report the standing assumption"},
      {"ruin", "Monte Carlo ruin probabilities on the u-grid"},
      {"yinf", "samples of Y_inf, Gbar and Gbar_*"},
      {"tail", "log-log slope and flatness of the ruin probabilities"},
      {"validate", "run the invariant checks"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config_path, "experiment JSON")->required();
    add_run_flags(sub);
    sub->callback([&selected, n = name] { selected = n; });
  }

  CLI::App* scen = app.add_subcommand("scenarios", "the built-in scenario catalog");
  scen->require_subcommand(1);
  scen->add_subcommand("list", "print every scenario")->callback([&] { selected = "scenarios list"; });
  std::string scenario_name;
  CLI::App* show = scen->add_subcommand("show", "print a scenario configuration");
  show->add_option("name", scenario_name)->required();
  show->callback([&] { selected = "scenarios show"; });
  std::string run_command = "tail";
  CLI::App* run = scen->add_subcommand("run", "run a command on a scenario");
  run->add_option("name", scenario_name)->required();
  run->add_option("--command", run_command, "beta, ruin, yinf, tail or validate")
      ->check(CLI::IsMember({"beta", "ruin", "yinf", "tail", "validate"}));
  add_run_flags(run);
  run->callback([&] { selected = "scenarios run"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (selected == "scenarios list") {
      for (const auto& s : scenario_catalog())
        out << s.name << "\t" << (s.tag ? to_string(*s.tag) : "oracle") << "\t" << s.description << "\n";
      return kOk;
    }
    if (selected == "scenarios show" || selected == "scenarios run") {
      const auto cat = scenario_catalog();
      const Scenario* s = find_scenario(cat, scenario_name);
      if (!s) {
        err << "error: unknown scenario '" << scenario_name << "' (see: ruinlab scenarios list)\n";
        return kInvalid;
      }
      if (selected == "scenarios show") {
        out << serialize(s->config);
        return kOk;
      }
      return dispatch(run_command, s->config, flags, s->tag, out);
    }
    ExperimentConfig cfg = parse_config(read_file(flags.config_path));
    return dispatch(selected, cfg, flags, catalog_tag(cfg), out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInvalid;
}

}  // namespace ruinlab::cli
