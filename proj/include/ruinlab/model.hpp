#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "errors.hpp"
#include "interarrival.hpp"
#include "levy_models.hpp"
#include "rng.hpp"

namespace ruinlab {

namespace claim {

struct Constant {
  double value;
  bool operator==(const Constant&) const = default;
};

// sign * Exp(mean).
struct Exponential {
  int sign;
  double mean;
  bool operator==(const Exponential&) const = default;
};

struct Uniform {
  double lo, hi;
  bool operator==(const Uniform&) const = default;
};

struct TwoPoint {
  double v1, v2, p1;
  bool operator==(const TwoPoint&) const = default;
};

// +Exp(mean_pos) with probability p_pos, -Exp(mean_neg) otherwise.
struct ExpMixture {
  double p_pos, mean_pos, mean_neg;
  bool operator==(const ExpMixture&) const = default;
};

// sign * Pareto(alpha, scale): P[|xi| > x] = (scale / x)^alpha, x >= scale.
struct Pareto {
  int sign;
  double alpha, scale;
  bool operator==(const Pareto&) const = default;
};

}  // namespace claim

using ClaimLaw =
    std::variant<claim::Constant, claim::Exponential, claim::Uniform, claim::TwoPoint, claim::ExpMixture, claim::Pareto>;

enum class SignClass { NonLife, Annuity, Mixed };

inline const char* to_string(SignClass c) {
  switch (c) {
    case SignClass::NonLife: return "non-life";
    case SignClass::Annuity: return "annuity";
    case SignClass::Mixed: return "mixed";
  }
  return "?";
}

struct ClaimProfile {
  bool charges_negative = false;
  bool charges_positive = false;
  bool unbounded_below = false;
  bool unbounded_above = false;
  bool positive_near_zero = false;  // F_xi((0, eps)) > 0 for every eps > 0
  bool has_atom_at_zero = false;
};

inline ClaimProfile profile(const ClaimLaw& law) {
  struct V {
    ClaimProfile operator()(const claim::Constant& l) const {
      return {l.value < 0, l.value > 0, false, false, false, l.value == 0};
    }
    ClaimProfile operator()(const claim::Exponential& l) const {
      return {l.sign < 0, l.sign > 0, l.sign < 0, l.sign > 0, l.sign > 0, false};
    }
    ClaimProfile operator()(const claim::Uniform& l) const {
      return {l.lo < 0, l.hi > 0, false, false, l.lo <= 0 && l.hi > 0, false};
    }
    ClaimProfile operator()(const claim::TwoPoint& l) const {
      return {l.v1 < 0 || l.v2 < 0, l.v1 > 0 || l.v2 > 0, false, false, false, l.v1 == 0 || l.v2 == 0};
    }
    ClaimProfile operator()(const claim::ExpMixture& l) const {
      return {l.p_pos < 1, l.p_pos > 0, l.p_pos < 1, l.p_pos > 0, l.p_pos > 0, false};
    }
    ClaimProfile operator()(const claim::Pareto& l) const {
      return {l.sign < 0, l.sign > 0, l.sign < 0, l.sign > 0, false, false};
    }
  };
  return std::visit(V{}, law);
}

inline SignClass sign_class(const ClaimLaw& law) {
  const ClaimProfile p = profile(law);
  if (p.charges_negative && p.charges_positive) return SignClass::Mixed;
  return p.charges_positive ? SignClass::Annuity : SignClass::NonLife;
}

inline void validate(const ClaimLaw& law) {
  struct V {
    void operator()(const claim::Constant& l) const {
      require(std::isfinite(l.value), ErrorKind::InvalidModel, "constant claim must be finite");
    }
    void operator()(const claim::Exponential& l) const {
      require(l.sign == 1 || l.sign == -1, ErrorKind::InvalidModel, "exponential claim: sign must be +1 or -1");
      require(l.mean > 0 && std::isfinite(l.mean), ErrorKind::InvalidModel, "exponential claim: mean must be > 0");
    }
    void operator()(const claim::Uniform& l) const {
      require(std::isfinite(l.lo) && std::isfinite(l.hi) && l.lo < l.hi, ErrorKind::InvalidModel,
              "uniform claim: need finite lo < hi");
    }
    void operator()(const claim::TwoPoint& l) const {
      require(std::isfinite(l.v1) && std::isfinite(l.v2), ErrorKind::InvalidModel, "two-point claim: values must be finite");
      require(l.p1 > 0 && l.p1 < 1, ErrorKind::InvalidModel, "two-point claim: p1 must lie in (0, 1)");
    }
    void operator()(const claim::ExpMixture& l) const {
      require(l.p_pos > 0 && l.p_pos < 1, ErrorKind::InvalidModel, "exp-mixture claim: p_pos must lie in (0, 1)");
      require(l.mean_pos > 0 && l.mean_neg > 0, ErrorKind::InvalidModel, "exp-mixture claim: means must be > 0");
    }
    void operator()(const claim::Pareto& l) const {
      require(l.sign == 1 || l.sign == -1, ErrorKind::InvalidModel, "pareto claim: sign must be +1 or -1");
      require(l.alpha > 0 && l.scale > 0, ErrorKind::InvalidModel, "pareto claim: alpha and scale must be > 0");
    }
  };
  std::visit(V{}, law);
  require(!profile(law).has_atom_at_zero, ErrorKind::InvalidModel, "claim law must satisfy F_xi({0}) = 0");
}

inline double sample(const ClaimLaw& law, Rng& rng) {
  struct V {
    Rng& rng;
    double operator()(const claim::Constant& l) const { return l.value; }
    double operator()(const claim::Exponential& l) const { return l.sign * (l.mean * rng.exponential(1.0)); }
    double operator()(const claim::Uniform& l) const { return rng.uniform(l.lo, l.hi); }
    double operator()(const claim::TwoPoint& l) const { return rng.uniform() < l.p1 ? l.v1 : l.v2; }
    double operator()(const claim::ExpMixture& l) const {
      const bool pos = rng.uniform() < l.p_pos;
      const double e = rng.exponential(1.0);
      return pos ? l.mean_pos * e : -(l.mean_neg * e);
    }
    double operator()(const claim::Pareto& l) const {
      return l.sign * (l.scale * std::pow(rng.uniform(), -1.0 / l.alpha));
    }
  };
  return std::visit(V{rng}, law);
}

// E|xi|^p < inf.
inline bool abs_moment_finite(const ClaimLaw& law, double p) {
  if (const auto* par = std::get_if<claim::Pareto>(&law)) return p < par->alpha;
  return true;
}

// Multiplies every claim by k > 0.
inline ClaimLaw scaled(const ClaimLaw& law, double k) {
  struct V {
    double k;
    ClaimLaw operator()(const claim::Constant& l) const { return claim::Constant{k * l.value}; }
    ClaimLaw operator()(const claim::Exponential& l) const { return claim::Exponential{l.sign, k * l.mean}; }
    ClaimLaw operator()(const claim::Uniform& l) const { return claim::Uniform{k * l.lo, k * l.hi}; }
    ClaimLaw operator()(const claim::TwoPoint& l) const { return claim::TwoPoint{k * l.v1, k * l.v2, l.p1}; }
    ClaimLaw operator()(const claim::ExpMixture& l) const {
      return claim::ExpMixture{l.p_pos, k * l.mean_pos, k * l.mean_neg};
    }
    ClaimLaw operator()(const claim::Pareto& l) const { return claim::Pareto{l.sign, l.alpha, k * l.scale}; }
  };
  return std::visit(V{k}, law);
}

// Business process P_t = c t + sum_{i <= N_t} xi_i with initial clock r.
struct BusinessSpec {
  double c = 0.0;
  InterarrivalLaw interarrival = arrival::Exponential{1.0};
  ClaimLaw claims = claim::Exponential{1, 1.0};
  double r = 0.0;
  bool operator==(const BusinessSpec&) const = default;
};

inline void validate(const BusinessSpec& b) {
  require(std::isfinite(b.c), ErrorKind::InvalidModel, "business: drift c must be finite");
  validate(b.interarrival);
  validate(b.claims);
  require(b.r >= 0 && std::isfinite(b.r), ErrorKind::InvalidModel, "business: initial clock r must be >= 0");
  require(survival(b.interarrival, b.r) > 0, ErrorKind::DegenerateResidual,
          "business: initial clock r leaves P[T > r] = 0");
  if (b.c >= 0 && sign_class(b.claims) == SignClass::Annuity)
    fail(ErrorKind::InvalidModel,
         "business: c >= 0 with positive claims means the ruin never happens; this case is excluded");
}

// Ruin-detection rule. Continuous crossings happen only while c < 0; jump
// crossings only when some claim can be negative.
struct CrossingRules {
  bool continuous;
  bool jump;
};

inline CrossingRules crossing_rules(const BusinessSpec& b) {
  const ClaimProfile p = profile(b.claims);
  return {b.c < 0, p.charges_negative};
}

struct Model {
  LevyTriplet triplet;
  BusinessSpec business;
  LogPriceLaw log_law;

  SignClass sign() const { return sign_class(business.claims); }
};

inline Model make_model(LevyTriplet triplet, BusinessSpec business) {
  validate(business);
  LogPriceLaw law = log_price_law(triplet);
  return Model{std::move(triplet), std::move(business), std::move(law)};
}

}  // namespace ruinlab
