#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "beta_solver.hpp"
#include "config.hpp"

namespace ruinlab {

// T1 non-life, T2 annuity, T3 mixed.
enum class Theorem { T1 = 1, T2 = 2, T3 = 3 };
enum class Case { C1, C2a, C2b, C2c, C2d, C2e };

struct ConditionTag {
  Theorem theorem;
  Case which;
  bool operator==(const ConditionTag&) const = default;
};

inline std::string to_string(ConditionTag t) {
  static const char* cases[] = {"1", "2a", "2b", "2c", "2d", "2e"};
  return "T" + std::to_string(static_cast<int>(t.theorem)) + "/" + cases[static_cast<int>(t.which)];
}

struct Scenario {
  std::string name;
  std::string description;
  std::optional<ConditionTag> tag;  // empty for the closed-form oracle
  ExperimentConfig config;
};

namespace detail {

struct JumpSides {
  bool negative = false;            // Pi((-1, 0)) > 0
  bool positive = false;            // Pi((0, inf)) > 0
  bool positive_small = false;      // some positive mass with price jump in (0, 1]
  bool power_negative = false;      // Pi(|h|) = inf from below
  bool power_positive = false;      // Pi(h) = inf from above
};

inline JumpSides jump_sides(const LevyTriplet& t) {
  JumpSides s;
  for (const auto& j : t.jumps) {
    if (!(j.rate > 0)) continue;
    const JumpLaw law = j.space == JumpSpace::Price ? to_log_space(j.law) : j.law;
    const Interval sup = support(law);
    s.negative = s.negative || charges_negative(law);
    s.positive = s.positive || charges_positive(law);
    s.positive_small = s.positive_small || (sup.hi > 0 && sup.lo < std::numbers::ln2);
  }
  for (const auto& m : t.power_measures) {
    if (!(m.scale > 0)) continue;
    (m.sign > 0 ? s.power_positive : s.power_negative) = true;
  }
  return s;
}

}  // namespace detail

// Programmatic check of the tagged hypotheses. Items are named after the
// condition they test; every item must pass for the tag to hold.
inline std::vector<CheckItem> check_condition(const ExperimentConfig& cfg, ConditionTag tag) {
  std::vector<CheckItem> out;
  const BusinessSpec& b = cfg.business;
  const ClaimProfile cp = profile(b.claims);
  const SignClass sc = sign_class(b.claims);
  const detail::JumpSides js = detail::jump_sides(cfg.investment);
  const bool up = js.positive || js.power_positive;
  const bool down = js.negative || js.power_negative;
  auto add = [&](const char* name, bool ok, std::string detail = {}) { out.push_back({name, ok, std::move(detail)}); };

  switch (tag.theorem) {
    case Theorem::T1:
      add("drift_nonnegative", b.c >= 0, "c = " + std::to_string(b.c));
      add("claims_negative", sc == SignClass::NonLife, to_string(sc));
      break;
    case Theorem::T2:
      add("drift_negative", b.c < 0, "c = " + std::to_string(b.c));
      add("claims_positive", sc == SignClass::Annuity, to_string(sc));
      break;
    case Theorem::T3:
      add("claims_both_signs", sc == SignClass::Mixed, to_string(sc));
      break;
  }

  // F((0, t)) > 0 in the non-life case, F((t, inf)) > 0 otherwise, and for
  // mixed claims with c >= 0 positive claims arbitrarily close to zero.
  auto support_condition = [&] {
    if (tag.theorem == Theorem::T1) {
      add("interarrival_small_times", support_lower(b.interarrival) == 0.0, "F((0,t)) > 0 for every t > 0");
    } else if (tag.theorem == Theorem::T2 || b.c < 0) {
      add("interarrival_unbounded", support_upper(b.interarrival) == kInf, "F((t,inf)) > 0 for every t > 0");
    } else {
      add("claims_near_zero", cp.positive_near_zero, "F_xi((0,eps)) > 0 for every eps > 0");
    }
  };

  const double s2 = cfg.investment.sigma2;
  switch (tag.which) {
    case Case::C1:
      if (tag.theorem == Theorem::T1)
        add("sigma_or_unbounded_claims", s2 > 0 || cp.unbounded_below, "sigma^2 > 0 or xi unbounded below");
      else if (tag.theorem == Theorem::T2)
        add("sigma_nonzero", s2 > 0, "sigma^2 = " + std::to_string(s2));
      else
        add("sigma_or_unbounded_claims", s2 > 0 || cp.unbounded_below || cp.unbounded_above,
            "sigma^2 > 0 or |xi| unbounded");
      break;
    case Case::C2a:
      add("jumps_down", down, "Pi((-1,0)) > 0");
      add("jumps_up", up, "Pi((0,inf)) > 0");
      break;
    case Case::C2b:
      add("no_jumps_down", !down, "Pi((-1,0)) = 0");
      add("infinite_variation_up", js.power_positive, "Pi(h) = inf");
      break;
    case Case::C2c:
      add("no_jumps_up", !up, "Pi((0,inf)) = 0");
      add("infinite_variation_down", js.power_negative, "Pi(|h|) = inf");
      break;
    case Case::C2d:
      add("no_jumps_down", !down, "Pi((-1,0)) = 0");
      add("finite_positive_h", js.positive_small && !js.power_positive, "0 < Pi(h) < inf");
      support_condition();
      break;
    case Case::C2e:
      add("no_jumps_up", !up, "Pi((0,inf)) = 0");
      add("finite_negative_h", js.negative && !js.power_negative, "0 < Pi(|h|) < inf");
      support_condition();
      break;
  }
  return out;
}

namespace detail {

inline LevyTriplet gbm(double a, double s2) {
  LevyTriplet t;
  t.a = a;
  t.sigma2 = s2;
  return t;
}

// Sets a so that V drifts at rate b between jumps.
inline LevyTriplet with_path_drift(LevyTriplet t, double b) {
  t.a = 0.0;
  t.a = b - log_price_law(t).path_drift();
  return t;
}

inline LevyTriplet log_atoms(double up, double down, double rate) {
  LevyTriplet t;
  t.jumps.push_back({rate, jump::PointMass{up}});
  t.jumps.push_back({rate, jump::PointMass{down}});
  return t;
}

inline LevyTriplet up_exponential() {
  LevyTriplet t;
  t.jumps.push_back({1.0, jump::Exponential{1, 2.0}});
  return with_path_drift(t, -0.25);  // psi(q) = q/4 - q/(2+q), root 2
}

inline LevyTriplet down_exponential() {
  LevyTriplet t;
  t.jumps.push_back({1.0, jump::Exponential{-1, 4.0}});
  return with_path_drift(t, 0.5);  // psi(q) = -q/2 + q/(4-q), root 2
}

inline LevyTriplet power(int sign) {
  LevyTriplet t;
  t.power_measures.push_back({sign, 1.5, 0.05, 1.0});
  return with_path_drift(t, sign > 0 ? -0.8 : 1.0);
}

inline BusinessSpec business(double c, ClaimLaw claims, InterarrivalLaw f = arrival::Exponential{1.0}) {
  BusinessSpec b;
  b.c = c;
  b.claims = claims;
  b.interarrival = f;
  return b;
}

inline Scenario make(std::string name, std::string description, std::optional<ConditionTag> tag, LevyTriplet inv,
                     BusinessSpec bus) {
  Scenario s;
  s.name = name;
  s.description = std::move(description);
  s.tag = tag;
  s.config.name = std::move(name);
  s.config.investment = std::move(inv);
  s.config.business = std::move(bus);
  s.config.declared_sign = sign_class(s.config.business.claims);
  return s;
}

}  // namespace detail

inline std::vector<Scenario> scenario_catalog() {
  using detail::business;
  using detail::make;
  const ClaimLaw pos_exp = claim::Exponential{1, 1.0};
  const ClaimLaw neg_exp = claim::Exponential{-1, 1.0};
  const ClaimLaw neg_bounded = claim::Uniform{-1.5, -0.5};
  const ClaimLaw pos_bounded = claim::Uniform{0.5, 1.5};
  const ClaimLaw mixed_exp = claim::ExpMixture{0.6, 1.0, 1.0};
  const ClaimLaw mixed_bounded = claim::Uniform{-1.0, 1.0};
  const InterarrivalLaw gamma = arrival::Gamma{2.0, 0.5};
  const LevyTriplet atoms = detail::with_path_drift(detail::log_atoms(0.4, -0.3, 1.0), 0.3);
  using T = Theorem;
  using C = Case;

  std::vector<Scenario> cat;
  // annuity: c < 0, xi > 0
  cat.push_back(make("annuity-gbm-beta1", "GBM a=0.2, sigma^2=0.2; Exp(1) arrivals; c=-1; xi ~ Exp(mean 1); beta = 1",
                     ConditionTag{T::T2, C::C1}, detail::gbm(0.2, 0.2), business(-1.0, pos_exp)));
  cat.push_back(make("annuity-jumps-2a", "log-price atoms at +0.4 and -0.3, no diffusion; c=-1; xi ~ Exp(mean 1)",
                     ConditionTag{T::T2, C::C2a}, atoms, business(-1.0, pos_exp)));
  cat.push_back(make("annuity-power-2b", "upward power measure alpha=1.5 (folded small jumps); c=-1",
                     ConditionTag{T::T2, C::C2b}, detail::power(1), business(-1.0, pos_bounded)));
  cat.push_back(make("annuity-power-2c", "downward power measure alpha=1.5 (folded small jumps); c=-1",
                     ConditionTag{T::T2, C::C2c}, detail::power(-1), business(-1.0, pos_bounded)));
  cat.push_back(make("annuity-upjumps-2d", "upward Exp(rate 2) log jumps, drift -0.25; Gamma(2, 0.5) arrivals; beta = 2",
                     ConditionTag{T::T2, C::C2d}, detail::up_exponential(), business(-1.0, pos_bounded, gamma)));
  cat.push_back(make("annuity-downjumps-2e", "downward Exp(rate 4) log jumps, drift 0.5; beta = 2",
                     ConditionTag{T::T2, C::C2e}, detail::down_exponential(), business(-1.0, pos_bounded)));

  // non-life: c >= 0, xi < 0
  cat.push_back(make("nonlife-gbm-1", "GBM a=0.3, sigma^2=0.2; Gamma(2, 0.5) arrivals; c=1; xi ~ -Exp(mean 1); beta = 2",
                     ConditionTag{T::T1, C::C1}, detail::gbm(0.3, 0.2), business(1.0, neg_exp, gamma)));
  cat.push_back(make("nonlife-jumps-2a", "log-price atoms at +0.4 and -0.3; c=1; bounded negative claims",
                     ConditionTag{T::T1, C::C2a}, atoms, business(1.0, neg_bounded)));
  cat.push_back(make("nonlife-power-2b", "upward power measure alpha=1.5; c=1; bounded negative claims",
                     ConditionTag{T::T1, C::C2b}, detail::power(1), business(1.0, neg_bounded)));
  cat.push_back(make("nonlife-power-2c", "downward power measure alpha=1.5; c=1; bounded negative claims",
                     ConditionTag{T::T1, C::C2c}, detail::power(-1), business(1.0, neg_bounded)));
  cat.push_back(make("nonlife-upjumps-2d", "upward Exp(rate 2) log jumps; c=1; bounded negative claims",
                     ConditionTag{T::T1, C::C2d}, detail::up_exponential(), business(1.0, neg_bounded)));
  cat.push_back(make("nonlife-downjumps-2e", "downward Exp(rate 4) log jumps; c=0; bounded negative claims",
                     ConditionTag{T::T1, C::C2e}, detail::down_exponential(), business(0.0, neg_bounded)));

  // mixed: claims of both signs
  cat.push_back(make("mixed-gbm-1", "GBM a=0.3, sigma^2=0.2; c=-0.5; xi = +Exp(1) w.p. 0.6, -Exp(1) otherwise",
                     ConditionTag{T::T3, C::C1}, detail::gbm(0.3, 0.2), business(-0.5, mixed_exp)));
  cat.push_back(make("mixed-jumps-2a", "log-price atoms at +1 and -0.5, a=0; c=0.5; exponential mixture claims",
                     ConditionTag{T::T3, C::C2a}, detail::log_atoms(1.0, -0.5, 1.0), business(0.5, mixed_exp)));
  cat.push_back(make("mixed-power-2b", "upward power measure alpha=1.5; c=-0.5; xi ~ U(-1, 1)",
                     ConditionTag{T::T3, C::C2b}, detail::power(1), business(-0.5, mixed_bounded)));
  cat.push_back(make("mixed-power-2c", "downward power measure alpha=1.5; c=0.5; xi ~ U(-1, 1)",
                     ConditionTag{T::T3, C::C2c}, detail::power(-1), business(0.5, mixed_bounded)));
  cat.push_back(make("mixed-upjumps-2d", "upward Exp(rate 2) log jumps; c=0.5; xi ~ U(-1, 1)",
                     ConditionTag{T::T3, C::C2d}, detail::up_exponential(), business(0.5, mixed_bounded)));
  cat.push_back(make("mixed-downjumps-2e", "downward Exp(rate 4) log jumps; c=-0.5; xi ~ U(-1, 1)",
                     ConditionTag{T::T3, C::C2e}, detail::down_exponential(), business(-0.5, mixed_bounded)));

  LevyTriplet det;
  det.a = 1.0;
  Scenario oracle = make("deterministic-oracle", "V_t = t, c=-1, xi = 1, T = 1; closed-form Q, M and Y_inf", {}, det,
                         business(-1.0, claim::Constant{1.0}, arrival::Deterministic{1.0}));
  oracle.config.run.u_grid = {0.5, 0.7};
  oracle.config.run.n_trials = 1000;
  oracle.config.run.n_yinf = 1000;
  cat.push_back(std::move(oracle));
  return cat;
}

inline const Scenario* find_scenario(const std::vector<Scenario>& cat, const std::string& name) {
  for (const auto& s : cat)
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace ruinlab
