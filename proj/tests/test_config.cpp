#include <set>
#include <string>

#include <gtest/gtest.h>

#include "ruinlab/config.hpp"
#include "ruinlab/scenarios.hpp"

using namespace ruinlab;

namespace {

const char* kMinimal = R"({
  "schema": "ruinlab.config/1",
  "investment": {"a": 0.3, "sigma2": 0.2},
  "business": {"c": -1, "interarrival": {"family": "exponential", "rate": 1},
               "claims": {"family": "exponential", "sign": 1, "mean": 1}}
})";

std::vector<std::string> violations(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  ADD_FAILURE() << "config accepted";
  return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(ParseConfig, MinimalGetsDefaults) {
  const ExperimentConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.investment.a, 0.3);
  EXPECT_EQ(c.investment.sigma2, 0.2);
  EXPECT_TRUE(c.investment.jumps.empty());
  EXPECT_EQ(c.business.c, -1.0);
  EXPECT_EQ(c.business.r, 0.0);
  EXPECT_EQ(c.run, RunConfig{});
  EXPECT_EQ(c.run.u_grid, (std::vector<double>{1, 2, 5, 10, 20}));
  EXPECT_EQ(c.run.t_max, kInf);
  EXPECT_FALSE(c.declared_sign);
}

TEST(ParseConfig, PositiveDriftWithPositiveClaimsIsRejected) {
  const auto v = violations(with("\"c\": -1", "\"c\": 0.1"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(mentions(v, "the ruin never happens"));
  EXPECT_TRUE(mentions(v, "$.business"));
}

TEST(ParseConfig, JumpAtMinusOneIsRejected) {
  const auto v = violations(with(R"("sigma2": 0.2})",
                                 R"("sigma2": 0.2, "jumps": [{"rate": 1, "space": "price", "law": {"family": "point", "at": -1}}]})"));
  EXPECT_TRUE(mentions(v, "Pi((-inf,-1]) = 0"));
}

TEST(ParseConfig, CollectsEveryViolation) {
  const std::string text = R"({
    "schema": "ruinlab.config/2",
    "colour": "blue",
    "investment": {"a": "high", "sigma2": -1},
    "business": {"c": -1, "interarrival": {"family": "lognormal", "mu": 0},
                 "claims": {"family": "exponential", "sign": 2, "mean": 1}},
    "run": {"n_sub": 0, "u_grid": [1, -2], "threads": 2, "bogus": 1}
  })";
  const auto v = violations(text);
  EXPECT_TRUE(mentions(v, "$.schema"));
  EXPECT_TRUE(mentions(v, "$.colour: unknown field"));
  EXPECT_TRUE(mentions(v, "$.investment.a: expected a number"));
  EXPECT_TRUE(mentions(v, "heavy-tailed interarrival family 'lognormal'"));
  EXPECT_TRUE(mentions(v, "$.business.claims.sign"));
  EXPECT_TRUE(mentions(v, "$.run.n_sub"));
  EXPECT_TRUE(mentions(v, "$.run.u_grid"));
  EXPECT_TRUE(mentions(v, "$.run.bogus: unknown field"));
  EXPECT_GE(v.size(), 8u);
}

TEST(ParseConfig, SemanticChecksOnInvestment) {
  EXPECT_TRUE(mentions(violations(with("\"sigma2\": 0.2", "\"sigma2\": -0.2")), "sigma2 must be >= 0"));
  EXPECT_TRUE(mentions(violations(with(R"("sigma2": 0.2})", R"("sigma2": 0.2, "power_measures": [{"sign": 1, "alpha": 2.5, "scale": 1}]})")),
                       "$.investment"));
}

TEST(ParseConfig, SyntaxErrorHasLocation) {
  const auto v = violations("{\n  \"investment\": {\"a\": 0.3,,}\n}");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_TRUE(mentions(v, "syntax error at line 2, column"));
}

TEST(ParseConfig, DeclaredSignMustMatch) {
  const auto v = violations(with("\"c\": -1,", "\"c\": -1, \"sign_class\": \"non-life\","));
  EXPECT_TRUE(mentions(v, "declared non-life but the claim law is annuity"));
  EXPECT_NO_THROW(parse_config(with("\"c\": -1,", "\"c\": -1, \"sign_class\": \"annuity\",")));
}

TEST(ParseConfig, HeavyTailedInterarrivalNamesRejected) {
  for (const char* fam : {"pareto", "lognormal", "burr"}) {
    const auto v = violations(with(R"("family": "exponential", "rate": 1)", std::string("\"family\": \"") + fam + "\""));
    EXPECT_TRUE(mentions(v, "heavy-tailed")) << fam;
  }
}

TEST(ParseConfig, NullHorizonMeansUnbounded) {
  std::string s = kMinimal;
  s.insert(s.rfind('}'), R"(, "run": {"t_max": null, "n_trials": 5e3})");
  const ExperimentConfig c = parse_config(s);
  EXPECT_EQ(c.run.t_max, kInf);
  EXPECT_EQ(c.run.n_trials, 5000u);
}

TEST(Serialize, RoundTripIsExact) {
  ExperimentConfig c = parse_config(kMinimal);
  c.investment.jumps.push_back({0.7, jump::TwoPoint{0.1, -0.2, 0.3}, JumpSpace::Price});
  c.investment.jumps.push_back({1.3, jump::Normal{0.01, 0.2}});
  c.business.interarrival = arrival::UniformShifted{0.2, 1.7};
  c.business.claims = claim::TwoPoint{0.5, 2.0, 0.25};
  c.business.r = 0.1;
  c.run.t_max = 1e3;
  c.run.u_margin = 0.1;
  c.run.r_grid = {0, 0.1 + 0.2};
  c.run.seed = 0xFFFFFFFFFFFFFFFFULL;
  const std::string text = serialize(c);
  const ExperimentConfig back = parse_config(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize(back), text);
}

TEST(Catalog, RoundTripsEveryScenario) {
  for (const auto& s : scenario_catalog()) {
    const std::string text = serialize(s.config);
    EXPECT_EQ(parse_config(text), s.config) << s.name;
    EXPECT_EQ(serialize(parse_config(text)), text) << s.name;
  }
}

TEST(Catalog, CoversEveryConditionTag) {
  const auto cat = scenario_catalog();
  EXPECT_GE(cat.size(), 10u);
  std::set<std::string> tags, names;
  for (const auto& s : cat) {
    EXPECT_TRUE(names.insert(s.name).second) << "duplicate " << s.name;
    if (s.tag) tags.insert(to_string(*s.tag));
  }
  for (const char* t : {"T1", "T2", "T3"})
    for (const char* k : {"1", "2a", "2b", "2c", "2d", "2e"})
      EXPECT_TRUE(tags.count(std::string(t) + "/" + k)) << t << "/" << k;
  EXPECT_NE(find_scenario(cat, "deterministic-oracle"), nullptr);
  EXPECT_NE(find_scenario(cat, "annuity-gbm-beta1"), nullptr);
  EXPECT_NE(find_scenario(cat, "annuity-jumps-2a"), nullptr);
}

TEST(Catalog, TaggedConditionsHoldAndBetaExists) {
  for (const auto& s : scenario_catalog()) {
    if (!s.tag) continue;
    for (const auto& item : check_condition(s.config, *s.tag))
      EXPECT_TRUE(item.pass) << s.name << ": " << item.name << " " << item.detail;
    const Model m = make_model(s.config);
    const StandingReport st = check_standing_assumption(m);
    EXPECT_TRUE(st.pass()) << s.name;
    const bool power = s.tag->which == Case::C2b || s.tag->which == Case::C2c;
    EXPECT_EQ(m.log_law.approximate, power) << s.name;
  }
}

TEST(Catalog, ExampleParameters) {
  const auto cat = scenario_catalog();
  const Scenario& g = *find_scenario(cat, "annuity-gbm-beta1");
  EXPECT_EQ(g.config.investment.a, 0.2);
  EXPECT_EQ(g.config.investment.sigma2, 0.2);
  EXPECT_EQ(g.config.business.c, -1.0);
  EXPECT_EQ(*g.tag, (ConditionTag{Theorem::T2, Case::C1}));
  EXPECT_NEAR(solve_beta(make_model(g.config)).beta, 1.0, 1e-10);
  const Scenario& j = *find_scenario(cat, "annuity-jumps-2a");
  EXPECT_EQ(j.config.investment.sigma2, 0.0);
  EXPECT_EQ(*j.tag, (ConditionTag{Theorem::T2, Case::C2a}));
}

TEST(CheckCondition, DetectsViolations) {
  const auto cat = scenario_catalog();
  ExperimentConfig c = find_scenario(cat, "annuity-gbm-beta1")->config;
  c.investment.sigma2 = 0.0;
  auto failing = [](const std::vector<CheckItem>& items) {
    std::set<std::string> out;
    for (const auto& i : items)
      if (!i.pass) out.insert(i.name);
    return out;
  };
  EXPECT_EQ(failing(check_condition(c, {Theorem::T2, Case::C1})), std::set<std::string>{"sigma_nonzero"});
  EXPECT_EQ(failing(check_condition(c, {Theorem::T1, Case::C1})),
            (std::set<std::string>{"drift_nonnegative", "claims_negative", "sigma_or_unbounded_claims"}));

  ExperimentConfig d = find_scenario(cat, "annuity-upjumps-2d")->config;
  d.business.interarrival = arrival::UniformShifted{0.5, 1.5};
  EXPECT_EQ(failing(check_condition(d, {Theorem::T2, Case::C2d})), std::set<std::string>{"interarrival_unbounded"});
  EXPECT_EQ(failing(check_condition(d, {Theorem::T2, Case::C2e})),
            (std::set<std::string>{"no_jumps_up", "finite_negative_h", "interarrival_unbounded"}));
  // upward jumps that all exceed ln 2 carry no mass where h is nonzero
  d.investment.jumps = {{1.0, jump::PointMass{0.8}}};
  EXPECT_TRUE(failing(check_condition(d, {Theorem::T2, Case::C2d})).count("finite_positive_h"));

  ExperimentConfig m = find_scenario(cat, "mixed-upjumps-2d")->config;
  m.business.claims = claim::TwoPoint{-1.0, 1.0, 0.5};
  EXPECT_EQ(failing(check_condition(m, {Theorem::T3, Case::C2d})), std::set<std::string>{"claims_near_zero"});
}
