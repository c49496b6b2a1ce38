#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "interarrival.hpp"
#include "jump_law.hpp"
#include "numerics.hpp"

namespace ruinlab {

// Space in which a jump component's parameters are given. Only atomic
// families (point, two-point) may be given in price space x; everything is
// converted once to y = ln(1 + x).
enum class JumpSpace { Log, Price };

struct JumpComponent {
  double rate = 0.0;
  JumpLaw law = jump::PointMass{0.0};
  JumpSpace space = JumpSpace::Log;
  bool operator==(const JumpComponent&) const = default;
};

// Infinite-activity power measure on the log scale:
//   Pi_V(dy) = scale * |y|^{-1-alpha} dy  on  0 < sign*y <= upper,  alpha in [1, 2).
// Only supported through the small-jump diffusion approximation.
struct PowerMeasure {
  int sign = 1;
  double alpha = 1.5;
  double scale = 1.0;
  double upper = 1.0;
  bool operator==(const PowerMeasure&) const = default;
};

// Triplet (a, sigma^2, Pi) of the return process R.
struct LevyTriplet {
  double a = 0.0;
  double sigma2 = 0.0;
  std::vector<JumpComponent> jumps;
  std::vector<PowerMeasure> power_measures;
  double small_jump_band = 1e-2;  // jumps with |y| < band are folded into the diffusion

  bool nondegenerate() const noexcept { return sigma2 > 0 || !jumps.empty() || !power_measures.empty(); }
  bool operator==(const LevyTriplet&) const = default;
};

struct LogJump {
  double rate;
  JumpLaw law;
  bool operator==(const LogJump&) const = default;
};

// Triplet (a_V, sigma^2, Pi_V) of V = ln S with finite-activity jumps.
struct LogPriceLaw {
  double drift = 0.0;            // a_V
  double sigma2 = 0.0;           // includes folded small-jump variance
  std::vector<LogJump> jumps;
  double folded_variance = 0.0;
  bool approximate = false;      // true when an infinite-activity measure was truncated

  // Sum of rate * E[h(Y)], the compensator of the kept jumps.
  double compensator() const {
    double s = 0.0;
    for (const auto& j : jumps) s += j.rate * truncated_mean(j.law);
    return s;
  }
  // Drift of V between jumps: V_t = b t + sigma W_t + sum of jumps.
  double path_drift() const { return drift - compensator(); }
  bool operator==(const LogPriceLaw&) const = default;
};

namespace detail {

inline JumpLaw to_log_space(const JumpLaw& law) {
  if (const auto* p = std::get_if<jump::PointMass>(&law)) {
    require(p->at > -1.0, ErrorKind::InvalidModel,
            "invalid triplet: jump mass at or below x = -1 (need Pi((-inf,-1]) = 0)");
    return jump::PointMass{std::log1p(p->at)};
  }
  if (const auto* t = std::get_if<jump::TwoPoint>(&law)) {
    require(t->at1 > -1.0 && t->at2 > -1.0, ErrorKind::InvalidModel,
            "invalid triplet: jump mass at or below x = -1 (need Pi((-inf,-1]) = 0)");
    return jump::TwoPoint{std::log1p(t->at1), std::log1p(t->at2), t->p1};
  }
  fail(ErrorKind::InvalidModel, "price-space jump input is only supported for point and two-point laws");
}

// \int (h(y) - h(e^y - 1)) Pi_V(dy) for a power measure; finite for alpha < 2.
// Near zero both truncations are the identity and the integrand is
// -scale * sum_{k>=2} (sign*z)^k / k! * z^{-1-alpha}, integrated termwise.
inline double power_measure_drift_shift(const PowerMeasure& m) {
  const double ln2 = std::numbers::ln2;
  const double s = m.sign > 0 ? std::min(m.upper, ln2) : std::min(m.upper, 1.0);
  double series = 0.0, fact = 1.0;
  for (int k = 2; k < 80; ++k) {
    fact *= k;
    const double sgn = (m.sign < 0 && (k % 2 == 1)) ? -1.0 : 1.0;
    const double term = sgn * std::pow(s, k - m.alpha) / ((k - m.alpha) * fact);
    series += term;
    if (std::fabs(term) < 1e-18) break;
  }
  double total = -m.scale * series;
  if (m.sign > 0) {
    // y in (ln2, min(upper, 1)]: h(y) = y, h(e^y - 1) = 0
    const double top = std::min(m.upper, 1.0);
    if (top > ln2) total += m.scale * power_integral(-m.alpha, ln2, top);
  } else if (m.upper > 1.0) {
    // z in (1, upper]: h(-z) = 0, h(e^{-z} - 1) = e^{-z} - 1
    total += m.scale * integrate([&](double z) { return -std::expm1(-z) * std::pow(z, -1.0 - m.alpha); },
                                 1.0, m.upper);
  }
  return total;
}

}  // namespace detail

inline void validate(const LevyTriplet& t) {
  require(std::isfinite(t.a), ErrorKind::InvalidModel, "invalid triplet: drift a must be finite");
  require(t.sigma2 >= 0 && std::isfinite(t.sigma2), ErrorKind::InvalidModel, "invalid triplet: sigma2 must be >= 0");
  for (const auto& j : t.jumps) {
    require(j.rate > 0 && std::isfinite(j.rate), ErrorKind::InvalidModel, "invalid triplet: jump rates must be > 0");
    validate(j.law);
    if (j.space == JumpSpace::Price) (void)detail::to_log_space(j.law);
  }
  for (const auto& m : t.power_measures) {
    require(m.sign == 1 || m.sign == -1, ErrorKind::InvalidModel, "power measure: sign must be +1 or -1");
    require(m.alpha >= 1.0 && m.alpha < 2.0, ErrorKind::InvalidModel,
            "power measure: alpha must lie in [1, 2) (infinite variation of h)");
    require(m.scale > 0 && m.upper > 0 && std::isfinite(m.upper), ErrorKind::InvalidModel,
            "power measure: scale and upper must be positive");
  }
  if (!t.power_measures.empty()) {
    for (const auto& m : t.power_measures)
      require(t.small_jump_band > 0 && t.small_jump_band < m.upper, ErrorKind::InvalidModel,
              "power measure: small_jump_band must lie in (0, upper)");
  }
}

// Maps the return triplet to the log-price triplet:
//   a_V = a - sigma^2/2 + Pi(h(ln(1+x)) - h(x)),  Pi_V = Pi o phi^{-1}.
inline LogPriceLaw log_price_law(const LevyTriplet& t) {
  validate(t);
  LogPriceLaw out;
  double shift = 0.0;
  for (const auto& j : t.jumps) {
    JumpLaw y = j.space == JumpSpace::Price ? detail::to_log_space(j.law) : j.law;
    shift += j.rate * (truncated_mean(y) - truncated_price_mean(y));
    out.jumps.push_back({j.rate, std::move(y)});
  }
  double folded = 0.0;
  for (const auto& m : t.power_measures) {
    shift += detail::power_measure_drift_shift(m);
    const double eps = t.small_jump_band;
    folded += m.scale * std::pow(eps, 2.0 - m.alpha) / (2.0 - m.alpha);
    const double kept_rate = m.scale * detail::power_integral(-1.0 - m.alpha, eps, m.upper);
    out.jumps.push_back({kept_rate, jump::TruncatedPower{m.sign, m.alpha, eps, m.upper}});
  }
  out.drift = t.a - 0.5 * t.sigma2 + shift;
  out.sigma2 = t.sigma2 + folded;
  out.folded_variance = folded;
  out.approximate = !t.power_measures.empty();
  return out;
}

// Inverse of the jump-space conversion for atomic families.
inline JumpLaw to_price_space(const JumpLaw& law) {
  if (const auto* p = std::get_if<jump::PointMass>(&law)) return jump::PointMass{std::expm1(p->at)};
  if (const auto* t = std::get_if<jump::TwoPoint>(&law))
    return jump::TwoPoint{std::expm1(t->at1), std::expm1(t->at2), t->p1};
  fail(ErrorKind::InvalidModel, "to_price_space: only point and two-point laws have a price-space form");
}

inline Interval effective_domain(const LogPriceLaw& law) {
  Interval d;
  for (const auto& j : law.jumps) {
    const Interval e = exp_moment_domain(j.law);
    d.lo = std::max(d.lo, e.lo);
    d.hi = std::min(d.hi, e.hi);
  }
  return d;
}

// psi(q) = ln E e^{-q V_1} = -q a_V + q^2 sigma^2 / 2 + sum rate * E[e^{-qY} - 1 + q h(Y)].
inline double levy_exponent(const LogPriceLaw& law, double q) {
  if (q == 0.0) return 0.0;
  const Interval d = effective_domain(law);
  if (!d.contains(q)) throw DomainError("levy_exponent", q, d.lo, d.hi);
  double psi = -q * law.drift + 0.5 * q * q * law.sigma2;
  for (const auto& j : law.jumps)
    psi += j.rate * ((exp_moment(j.law, q) - 1.0) + q * truncated_mean(j.law));
  return psi;
}

// psi bound to its law and domain.
class Cumulant {
 public:
  explicit Cumulant(LogPriceLaw law) : law_(std::move(law)), domain_(effective_domain(law_)) {}

  double operator()(double q) const { return levy_exponent(law_, q); }
  const Interval& domain() const noexcept { return domain_; }
  const LogPriceLaw& law() const noexcept { return law_; }

 private:
  LogPriceLaw law_;
  Interval domain_;
};

// H(q) = ln E e^{-q V_{T_1}} = ln M_T(psi(q)).
inline double cumulant_H(const LogPriceLaw& law, const InterarrivalLaw& arrivals, double q) {
  const double psi = levy_exponent(law, q);
  const double top = mgf_upper(arrivals);
  if (!(psi < top)) throw DomainError("interarrival_mgf", psi, -kInf, top);
  return std::log(mgf(arrivals, psi));
}

}  // namespace ruinlab
