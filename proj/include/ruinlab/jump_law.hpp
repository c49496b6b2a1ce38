#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "errors.hpp"
#include "numerics.hpp"
#include "rng.hpp"

// Jump-size laws of the log-price process, written in y = ln(1 + x).
namespace ruinlab {

namespace jump {

struct PointMass {
  double at;
  bool operator==(const PointMass&) const = default;
};

// Y = sign * Z with Z ~ Exp(rate).
struct Exponential {
  int sign;
  double rate;
  bool operator==(const Exponential&) const = default;
};

struct Uniform {
  double lo, hi;
  bool operator==(const Uniform&) const = default;
};

struct Normal {
  double mean, sd;
  bool operator==(const Normal&) const = default;
};

// at1 with probability p1, at2 otherwise.
struct TwoPoint {
  double at1, at2, p1;
  bool operator==(const TwoPoint&) const = default;
};

// Y = sign * Z, Z with density proportional to z^{-1-alpha} on [lo, hi].
// Produced by truncating an infinite-activity power measure; not a user family.
struct TruncatedPower {
  int sign;
  double alpha, lo, hi;
  bool operator==(const TruncatedPower&) const = default;
};

}  // namespace jump

using JumpLaw =
    std::variant<jump::PointMass, jump::Exponential, jump::Uniform, jump::Normal,
                 jump::TwoPoint, jump::TruncatedPower>;

struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool contains(double q) const noexcept { return q > lo && q < hi; }
  bool operator==(const Interval&) const = default;
};

inline std::string family_name(const JumpLaw& law) {
  struct V {
    std::string operator()(const jump::PointMass&) const { return "point"; }
    std::string operator()(const jump::Exponential&) const { return "exponential"; }
    std::string operator()(const jump::Uniform&) const { return "uniform"; }
    std::string operator()(const jump::Normal&) const { return "normal"; }
    std::string operator()(const jump::TwoPoint&) const { return "two-point"; }
    std::string operator()(const jump::TruncatedPower&) const { return "truncated-power"; }
  };
  return std::visit(V{}, law);
}

inline void validate(const JumpLaw& law) {
  struct V {
    void operator()(const jump::PointMass& l) const {
      require(std::isfinite(l.at), ErrorKind::InvalidModel, "point jump: location must be finite");
    }
    void operator()(const jump::Exponential& l) const {
      require(l.sign == 1 || l.sign == -1, ErrorKind::InvalidModel, "exponential jump: sign must be +1 or -1");
      require(l.rate > 0 && std::isfinite(l.rate), ErrorKind::InvalidModel, "exponential jump: rate must be positive");
    }
    void operator()(const jump::Uniform& l) const {
      require(std::isfinite(l.lo) && std::isfinite(l.hi) && l.lo < l.hi, ErrorKind::InvalidModel,
              "uniform jump: need finite lo < hi");
    }
    void operator()(const jump::Normal& l) const {
      require(std::isfinite(l.mean) && l.sd > 0 && std::isfinite(l.sd), ErrorKind::InvalidModel,
              "normal jump: need finite mean and sd > 0");
    }
    void operator()(const jump::TwoPoint& l) const {
      require(std::isfinite(l.at1) && std::isfinite(l.at2), ErrorKind::InvalidModel,
              "two-point jump: locations must be finite");
      require(l.p1 > 0 && l.p1 < 1, ErrorKind::InvalidModel, "two-point jump: p1 must lie in (0, 1)");
    }
    void operator()(const jump::TruncatedPower& l) const {
      require(l.sign == 1 || l.sign == -1, ErrorKind::InvalidModel, "power jump: sign must be +1 or -1");
      require(l.alpha > 0 && l.alpha < 2, ErrorKind::InvalidModel, "power jump: alpha must lie in (0, 2)");
      require(l.lo > 0 && l.lo < l.hi && std::isfinite(l.hi), ErrorKind::InvalidModel,
              "power jump: need 0 < lo < hi < inf");
    }
  };
  std::visit(V{}, law);
}

namespace detail {

// \int_lo^hi z^{p} dz
inline double power_integral(double p, double lo, double hi) {
  if (std::fabs(p + 1.0) < 1e-14) return std::log(hi / lo);
  return (std::pow(hi, p + 1.0) - std::pow(lo, p + 1.0)) / (p + 1.0);
}

inline double power_norm(const jump::TruncatedPower& l) {
  return power_integral(-1.0 - l.alpha, l.lo, l.hi);
}

inline double h(double y) { return std::fabs(y) <= 1.0 ? y : 0.0; }

// E[g(Y)] for the truncated power law, by quadrature in s = ln z, split at the
// kinks of the truncation functions.
template <class G>
double power_expect(const jump::TruncatedPower& l, G&& g) {
  const double norm = power_norm(l);
  auto f = [&](double s) {
    const double z = std::exp(s);
    return g(l.sign * z) * std::exp(-l.alpha * s);
  };
  double cuts[4] = {std::log(l.lo), 0.0, std::log(std::numbers::ln2), std::log(l.hi)};
  std::sort(cuts + 1, cuts + 3);
  double sum = 0.0, a = cuts[0];
  for (int i = 1; i < 4; ++i) {
    const double b = std::clamp(cuts[i], cuts[0], cuts[3]);
    if (b > a) {
      sum += integrate(f, a, b);
      a = b;
    }
  }
  return sum / norm;
}

}  // namespace detail

// Open interval of q on which E[e^{-qY}] is finite.
inline Interval exp_moment_domain(const JumpLaw& law) {
  if (const auto* e = std::get_if<jump::Exponential>(&law)) {
    return e->sign > 0 ? Interval{-e->rate, kInf} : Interval{-kInf, e->rate};
  }
  return {};
}

// E[e^{-qY}]; +infinity outside the domain.
inline double exp_moment(const JumpLaw& law, double q) {
  struct V {
    double q;
    double operator()(const jump::PointMass& l) const { return std::exp(-q * l.at); }
    double operator()(const jump::Exponential& l) const {
      const double den = l.rate + l.sign * q;
      return den > 0 ? l.rate / den : kInf;
    }
    double operator()(const jump::Uniform& l) const {
      const double w = l.hi - l.lo;
      return std::exp(-q * l.lo) * one_minus_exp_over(q * w);
    }
    double operator()(const jump::Normal& l) const {
      return std::exp(-q * l.mean + 0.5 * q * q * l.sd * l.sd);
    }
    double operator()(const jump::TwoPoint& l) const {
      return l.p1 * std::exp(-q * l.at1) + (1 - l.p1) * std::exp(-q * l.at2);
    }
    double operator()(const jump::TruncatedPower& l) const {
      const double qq = q;
      return detail::power_expect(l, [qq](double y) { return std::exp(-qq * y); });
    }
  };
  return std::visit(V{q}, law);
}

// E[h(Y)] with the truncation h(y) = y 1{|y| <= 1}.
inline double truncated_mean(const JumpLaw& law) {
  struct V {
    double operator()(const jump::PointMass& l) const { return detail::h(l.at); }
    double operator()(const jump::Exponential& l) const {
      const double g = l.rate;
      return l.sign * (-std::expm1(-g) - g * std::exp(-g)) / g;
    }
    double operator()(const jump::Uniform& l) const {
      const double a = std::max(l.lo, -1.0), b = std::min(l.hi, 1.0);
      if (a >= b) return 0.0;
      return (b * b - a * a) / (2.0 * (l.hi - l.lo));
    }
    double operator()(const jump::Normal& l) const {
      const double a = (-1.0 - l.mean) / l.sd, b = (1.0 - l.mean) / l.sd;
      return l.mean * (normal_cdf(b) - normal_cdf(a)) + l.sd * (normal_pdf(a) - normal_pdf(b));
    }
    double operator()(const jump::TwoPoint& l) const {
      return l.p1 * detail::h(l.at1) + (1 - l.p1) * detail::h(l.at2);
    }
    double operator()(const jump::TruncatedPower& l) const {
      const double top = std::min(l.hi, 1.0);
      if (top <= l.lo) return 0.0;
      return l.sign * detail::power_integral(-l.alpha, l.lo, top) / detail::power_norm(l);
    }
  };
  return std::visit(V{}, law);
}

// E[h(e^Y - 1)]: the truncated mean of the price-space jump x = e^y - 1.
// Since x > -1, |x| <= 1 iff y <= ln 2.
inline double truncated_price_mean(const JumpLaw& law) {
  static constexpr double ln2 = std::numbers::ln2;
  auto hx = [](double y) { return detail::h(std::expm1(y)); };
  struct V {
    decltype(hx) hx_;
    double operator()(const jump::PointMass& l) const { return hx_(l.at); }
    double operator()(const jump::Exponential& l) const {
      const double g = l.rate;
      if (l.sign < 0) return -1.0 / (g + 1.0);
      // \int_0^{ln2} (e^z - 1) g e^{-gz} dz
      const double first = std::fabs(1.0 - g) < 1e-12 ? g * ln2 : g * std::expm1((1.0 - g) * ln2) / (1.0 - g);
      return first + std::expm1(-g * ln2);
    }
    double operator()(const jump::Uniform& l) const {
      const double b = std::min(l.hi, ln2);
      if (b <= l.lo) return 0.0;
      return ((std::exp(b) - std::exp(l.lo)) - (b - l.lo)) / (l.hi - l.lo);
    }
    double operator()(const jump::Normal& l) const {
      const double s = l.sd, m = l.mean;
      return std::exp(m + 0.5 * s * s) * normal_cdf((ln2 - m - s * s) / s) - normal_cdf((ln2 - m) / s);
    }
    double operator()(const jump::TwoPoint& l) const {
      return l.p1 * hx_(l.at1) + (1 - l.p1) * hx_(l.at2);
    }
    double operator()(const jump::TruncatedPower& l) const {
      return detail::power_expect(l, hx_);
    }
  };
  return std::visit(V{hx}, law);
}

inline double sample(const JumpLaw& law, Rng& rng) {
  struct V {
    Rng& rng;
    double operator()(const jump::PointMass& l) const { return l.at; }
    double operator()(const jump::Exponential& l) const { return l.sign * rng.exponential(l.rate); }
    double operator()(const jump::Uniform& l) const { return rng.uniform(l.lo, l.hi); }
    double operator()(const jump::Normal& l) const { return l.mean + l.sd * rng.normal(); }
    double operator()(const jump::TwoPoint& l) const { return rng.uniform() < l.p1 ? l.at1 : l.at2; }
    double operator()(const jump::TruncatedPower& l) const {
      const double a = std::pow(l.lo, -l.alpha), b = std::pow(l.hi, -l.alpha);
      return l.sign * std::pow(a - rng.uniform() * (a - b), -1.0 / l.alpha);
    }
  };
  return std::visit(V{rng}, law);
}

// Closed support [lo, hi] in y-space (infinite ends allowed).
inline Interval support(const JumpLaw& law) {
  struct V {
    Interval operator()(const jump::PointMass& l) const { return {l.at, l.at}; }
    Interval operator()(const jump::Exponential& l) const {
      return l.sign > 0 ? Interval{0.0, kInf} : Interval{-kInf, 0.0};
    }
    Interval operator()(const jump::Uniform& l) const { return {l.lo, l.hi}; }
    Interval operator()(const jump::Normal&) const { return {}; }
    Interval operator()(const jump::TwoPoint& l) const {
      return {std::min(l.at1, l.at2), std::max(l.at1, l.at2)};
    }
    Interval operator()(const jump::TruncatedPower& l) const {
      return l.sign > 0 ? Interval{l.lo, l.hi} : Interval{-l.hi, -l.lo};
    }
  };
  return std::visit(V{}, law);
}

// P[Y < 0] > 0 and P[Y > 0] > 0 respectively.
inline bool charges_negative(const JumpLaw& law) { return support(law).lo < 0; }
inline bool charges_positive(const JumpLaw& law) { return support(law).hi > 0; }

}  // namespace ruinlab
