#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace ruinlab {

namespace arrival {

struct Exponential {
  double rate;
  bool operator==(const Exponential&) const = default;
};

// Gamma(shape, scale) conditioned on T > elapsed and shifted by -elapsed.
// elapsed = 0 is the plain gamma law.
struct Gamma {
  double shape, scale, elapsed = 0.0;
  bool operator==(const Gamma&) const = default;
};

struct Deterministic {
  double length;
  bool operator==(const Deterministic&) const = default;
};

// Uniform on (lo, hi), 0 <= lo < hi.
struct UniformShifted {
  double lo, hi;
  bool operator==(const UniformShifted&) const = default;
};

}  // namespace arrival

using InterarrivalLaw =
    std::variant<arrival::Exponential, arrival::Gamma, arrival::Deterministic, arrival::UniformShifted>;

inline std::string family_name(const InterarrivalLaw& law) {
  struct V {
    std::string operator()(const arrival::Exponential&) const { return "exponential"; }
    std::string operator()(const arrival::Gamma&) const { return "gamma"; }
    std::string operator()(const arrival::Deterministic&) const { return "deterministic"; }
    std::string operator()(const arrival::UniformShifted&) const { return "uniform"; }
  };
  return std::visit(V{}, law);
}

// Every family here has E[e^{eps T}] < inf for some eps > 0. Heavy-tailed
// families are refused by name at configuration time (see is_heavy_tailed_family).
inline void validate(const InterarrivalLaw& law) {
  struct V {
    void operator()(const arrival::Exponential& l) const {
      require(l.rate > 0 && std::isfinite(l.rate), ErrorKind::InvalidModel, "exponential interarrival: rate must be positive");
    }
    void operator()(const arrival::Gamma& l) const {
      require(l.shape > 0 && l.scale > 0 && std::isfinite(l.shape) && std::isfinite(l.scale),
              ErrorKind::InvalidModel, "gamma interarrival: shape and scale must be positive");
      require(l.elapsed >= 0 && std::isfinite(l.elapsed), ErrorKind::InvalidModel,
              "gamma interarrival: elapsed must be nonnegative");
    }
    void operator()(const arrival::Deterministic& l) const {
      require(l.length > 0 && std::isfinite(l.length), ErrorKind::InvalidModel,
              "deterministic interarrival: length must be positive");
    }
    void operator()(const arrival::UniformShifted& l) const {
      require(l.lo >= 0 && l.lo < l.hi && std::isfinite(l.hi), ErrorKind::InvalidModel,
              "uniform interarrival: need 0 <= lo < hi < inf");
    }
  };
  std::visit(V{}, law);
}

inline bool is_heavy_tailed_family(const std::string& name) {
  return name == "pareto" || name == "lognormal" || name == "loglogistic" || name == "weibull-heavy" ||
         name == "burr";
}

// Upper end of the MGF domain: M_T(s) < inf iff s < mgf_upper(law).
inline double mgf_upper(const InterarrivalLaw& law) {
  struct V {
    double operator()(const arrival::Exponential& l) const { return l.rate; }
    double operator()(const arrival::Gamma& l) const { return 1.0 / l.scale; }
    double operator()(const arrival::Deterministic&) const { return kInf; }
    double operator()(const arrival::UniformShifted&) const { return kInf; }
  };
  return std::visit(V{}, law);
}

// M_T(s) = E[e^{sT}].
inline double mgf(const InterarrivalLaw& law, double s) {
  const double top = mgf_upper(law);
  if (!(s < top)) throw DomainError("interarrival_mgf", s, -kInf, top);
  struct V {
    double s;
    double operator()(const arrival::Exponential& l) const { return l.rate / (l.rate - s); }
    double operator()(const arrival::Gamma& l) const {
      const double base = std::pow(1.0 - l.scale * s, -l.shape);
      if (l.elapsed == 0.0) return base;
      using boost::math::gamma_q;
      const double r = l.elapsed;
      return std::exp(-s * r) * base * gamma_q(l.shape, r * (1.0 / l.scale - s)) / gamma_q(l.shape, r / l.scale);
    }
    double operator()(const arrival::Deterministic& l) const { return std::exp(s * l.length); }
    double operator()(const arrival::UniformShifted& l) const {
      const double w = l.hi - l.lo;
      if (s == 0.0) return 1.0;
      return std::exp(s * l.lo) * std::expm1(s * w) / (s * w);
    }
  };
  return std::visit(V{s}, law);
}

// P[T <= t].
inline double cdf(const InterarrivalLaw& law, double t) {
  if (t <= 0) return 0.0;
  struct V {
    double t;
    double operator()(const arrival::Exponential& l) const { return -std::expm1(-l.rate * t); }
    double operator()(const arrival::Gamma& l) const {
      using boost::math::gamma_q;
      const double base = gamma_q(l.shape, l.elapsed / l.scale);
      return 1.0 - gamma_q(l.shape, (t + l.elapsed) / l.scale) / base;
    }
    double operator()(const arrival::Deterministic& l) const { return t >= l.length ? 1.0 : 0.0; }
    double operator()(const arrival::UniformShifted& l) const {
      return std::clamp((t - l.lo) / (l.hi - l.lo), 0.0, 1.0);
    }
  };
  return std::visit(V{t}, law);
}

inline double survival(const InterarrivalLaw& law, double t) { return 1.0 - cdf(law, t); }

inline double mean(const InterarrivalLaw& law) {
  struct V {
    double operator()(const arrival::Exponential& l) const { return 1.0 / l.rate; }
    double operator()(const arrival::Gamma& l) const {
      if (l.elapsed == 0.0) return l.shape * l.scale;
      using boost::math::gamma_q;
      // E[T - r | T > r] = k theta Q(k+1, r/theta) / Q(k, r/theta) - r
      const double x = l.elapsed / l.scale;
      return l.shape * l.scale * gamma_q(l.shape + 1.0, x) / gamma_q(l.shape, x) - l.elapsed;
    }
    double operator()(const arrival::Deterministic& l) const { return l.length; }
    double operator()(const arrival::UniformShifted& l) const { return 0.5 * (l.lo + l.hi); }
  };
  return std::visit(V{}, law);
}

// Supremum of the support (inf when unbounded).
inline double support_upper(const InterarrivalLaw& law) {
  struct V {
    double operator()(const arrival::Exponential&) const { return kInf; }
    double operator()(const arrival::Gamma&) const { return kInf; }
    double operator()(const arrival::Deterministic& l) const { return l.length; }
    double operator()(const arrival::UniformShifted& l) const { return l.hi; }
  };
  return std::visit(V{}, law);
}

// Infimum of the support.
inline double support_lower(const InterarrivalLaw& law) {
  if (const auto* d = std::get_if<arrival::Deterministic>(&law)) return d->length;
  if (const auto* u = std::get_if<arrival::UniformShifted>(&law)) return u->lo;
  return 0.0;
}

inline double sample(const InterarrivalLaw& law, Rng& rng) {
  struct V {
    Rng& rng;
    double operator()(const arrival::Exponential& l) const { return rng.exponential(l.rate); }
    double operator()(const arrival::Gamma& l) const {
      if (l.elapsed == 0.0) return l.scale * rng.gamma(l.shape);
      using boost::math::gamma_q;
      using boost::math::gamma_q_inv;
      const double tail = gamma_q(l.shape, l.elapsed / l.scale);
      const double t = l.scale * gamma_q_inv(l.shape, rng.uniform() * tail) - l.elapsed;
      return std::max(t, 0x1.0p-60);
    }
    double operator()(const arrival::Deterministic& l) const { return l.length; }
    double operator()(const arrival::UniformShifted& l) const { return rng.uniform(l.lo, l.hi); }
  };
  return std::visit(V{rng}, law);
}

// Law of the first interarrival time when r time units have already elapsed:
// P[T^r > t] = P[T > t + r] / P[T > r].
inline InterarrivalLaw residual_law(const InterarrivalLaw& law, double r) {
  require(r >= 0 && std::isfinite(r), ErrorKind::Precondition, "residual_law: r must be a nonnegative real");
  if (r == 0.0) return law;
  struct V {
    double r;
    InterarrivalLaw operator()(const arrival::Exponential& l) const { return l; }
    InterarrivalLaw operator()(const arrival::Gamma& l) const {
      arrival::Gamma g = l;
      g.elapsed += r;
      if (!(boost::math::gamma_q(g.shape, g.elapsed / g.scale) > 0))
        fail(ErrorKind::DegenerateResidual, "residual_law: P[T > r] underflows for the gamma law");
      return g;
    }
    InterarrivalLaw operator()(const arrival::Deterministic& l) const {
      if (r >= l.length)
        fail(ErrorKind::DegenerateResidual, "residual_law: deterministic interarrival has P[T > r] = 0");
      return arrival::Deterministic{l.length - r};
    }
    InterarrivalLaw operator()(const arrival::UniformShifted& l) const {
      if (r >= l.hi) fail(ErrorKind::DegenerateResidual, "residual_law: uniform interarrival has P[T > r] = 0");
      return arrival::UniformShifted{std::max(l.lo - r, 0.0), l.hi - r};
    }
  };
  return std::visit(V{r}, law);
}

struct DelayViolation {
  double r = 0, t = 0, F = 0, Fr = 0;
};

struct DelayDominanceReport {
  bool pass = true;
  std::size_t points_checked = 0;
  std::size_t points_skipped = 0;  // r with P[T > r] = 0
  double worst_gap = 0.0;          // max of F(t) - F^r(t), <= 0 when passing
  DelayViolation worst;
};

// Checks F^r(t) >= F(t) on the product grid.
inline DelayDominanceReport validate_delay_dominance(const InterarrivalLaw& law, std::span<const double> r_grid,
                                                     std::span<const double> t_grid, double slack = 1e-12) {
  DelayDominanceReport rep;
  rep.worst_gap = -kInf;
  for (double r : r_grid) {
    if (!(survival(law, r) > 0)) {
      ++rep.points_skipped;
      continue;
    }
    const InterarrivalLaw res = residual_law(law, r);
    for (double t : t_grid) {
      const double F = cdf(law, t), Fr = cdf(res, t);
      ++rep.points_checked;
      if (F - Fr > rep.worst_gap) {
        rep.worst_gap = F - Fr;
        rep.worst = {r, t, F, Fr};
      }
    }
  }
  if (rep.points_checked == 0) rep.worst_gap = 0.0;
  rep.pass = rep.worst_gap <= slack;
  return rep;
}

}  // namespace ruinlab
