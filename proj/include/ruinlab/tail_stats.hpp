#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace ruinlab {

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
};

namespace detail {
inline void check_tail_input(std::span<const double> u, std::span<const double> psi) {
  require(u.size() == psi.size(), ErrorKind::Precondition, "tail: u-grid and probabilities differ in length");
  require(u.size() >= 3, ErrorKind::Precondition, "tail: need at least 3 grid points");
  for (std::size_t i = 0; i < u.size(); ++i) {
    require(u[i] > 0, ErrorKind::Precondition, "tail: u-grid must be positive");
    if (i > 0) require(u[i] > u[i - 1], ErrorKind::Precondition, "tail: u-grid must be strictly increasing");
    if (!(psi[i] > 0))
      fail(ErrorKind::DegenerateInput,
           "tail: zero probability at u = " + std::to_string(u[i]) + "; truncate the grid below this point");
  }
}
}  // namespace detail

// OLS of ln psi on ln u.
inline SlopeFit loglog_slope(std::span<const double> u, std::span<const double> psi) {
  detail::check_tail_input(u, psi);
  const std::size_t n = u.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(u[i]);
    my += std::log(psi[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(u[i]) - mx, dy = std::log(psi[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(psi[i]) - fit.intercept - fit.slope * std::log(u[i]);
    ssr += r * r;
  }
  fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  return fit;
}

// max / min of u^beta psi(u) over the grid.
inline double flatness(std::span<const double> u, std::span<const double> psi, double beta) {
  detail::check_tail_input(u, psi);
  double lo = kInf, hi = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::pow(u[i], beta) * psi[i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

// Classical Hill estimate of the tail index from the k largest positive samples.
inline double hill_estimator(std::span<const double> samples, std::size_t k) {
  std::vector<double> pos;
  pos.reserve(samples.size());
  for (double x : samples)
    if (x > 0) pos.push_back(x);
  require(k >= 2, ErrorKind::Precondition, "hill_estimator: k must be >= 2");
  require(k < pos.size(), ErrorKind::Precondition,
          "hill_estimator: k must be smaller than the number of positive samples");
  std::nth_element(pos.begin(), pos.end() - static_cast<std::ptrdiff_t>(k) - 1, pos.end());
  const double threshold = *(pos.end() - static_cast<std::ptrdiff_t>(k) - 1);
  double sum = 0;
  for (auto it = pos.end() - static_cast<std::ptrdiff_t>(k); it != pos.end(); ++it) sum += std::log(*it / threshold);
  if (!(sum > 0)) fail(ErrorKind::DegenerateInput, "hill_estimator: zero log-spacings (constant upper tail)");
  return static_cast<double>(k) / sum;
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
inline double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0, sign = 1;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::Precondition, "ks_two_sample: both samples must be nonempty");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  KsResult res;
  res.statistic = d;
  res.p_value = d == 0 ? 1.0 : kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  return res;
}

struct HillPoint {
  std::size_t k = 0;
  double alpha = 0.0;
};

struct TailSide {
  SlopeFit fit;
  double flatness = 0.0;
  bool slope_ok = false;
  bool flat_ok = false;
};

struct TailReport {
  std::vector<double> u;
  std::vector<double> psi_low, psi_high;
  double beta = 0.0;
  double slope_tolerance = 0.15;
  double flatness_limit = 3.0;
  TailSide low, high;
  std::optional<HillPoint> hill;          // k = floor(n^0.6)
  std::vector<HillPoint> hill_sensitivity;  // k = n^0.5, n^0.6, n^0.7
  bool verdict = false;
};

inline TailSide tail_side(std::span<const double> u, std::span<const double> psi, double beta, double slope_tol,
                          double flat_limit) {
  TailSide s;
  s.fit = loglog_slope(u, psi);
  s.flatness = flatness(u, psi, beta);
  s.slope_ok = std::fabs(s.fit.slope + beta) <= slope_tol;
  s.flat_ok = s.flatness <= flat_limit;
  return s;
}

// Slope and flatness are checked on both the low and the high ruin estimates;
// the verdict needs both to pass.
inline TailReport tail_report(std::vector<double> u, std::vector<double> psi_low, std::vector<double> psi_high,
                              double beta, std::span<const double> yinf_samples = {}, double slope_tol = 0.15,
                              double flat_limit = 3.0) {
  TailReport rep;
  rep.low = tail_side(u, psi_low, beta, slope_tol, flat_limit);
  rep.high = tail_side(u, psi_high, beta, slope_tol, flat_limit);
  rep.u = std::move(u);
  rep.psi_low = std::move(psi_low);
  rep.psi_high = std::move(psi_high);
  rep.beta = beta;
  rep.slope_tolerance = slope_tol;
  rep.flatness_limit = flat_limit;
  std::size_t positives = 0;
  for (double y : yinf_samples) positives += y > 0;
  if (positives > 10) {
    const double n = static_cast<double>(yinf_samples.size());
    for (double e : {0.5, 0.6, 0.7}) {
      const auto k = static_cast<std::size_t>(std::floor(std::pow(n, e)));
      if (k >= 2 && k < positives) {
        try {
          rep.hill_sensitivity.push_back({k, hill_estimator(yinf_samples, k)});
          if (e == 0.6) rep.hill = rep.hill_sensitivity.back();
        } catch (const Error&) {
        }
      }
    }
  }
  rep.verdict = rep.low.slope_ok && rep.low.flat_ok && rep.high.slope_ok && rep.high.flat_ok;
  return rep;
}

}  // namespace ruinlab
