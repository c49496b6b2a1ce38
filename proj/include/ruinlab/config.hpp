#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "interarrival.hpp"
#include "jump_law.hpp"
#include "levy_models.hpp"
#include "model.hpp"
#include "path_engine.hpp"
#include "ruin_mc.hpp"

namespace ruinlab {

inline constexpr const char* kConfigSchema = "ruinlab.config/1";

struct RunConfig {
  std::vector<double> u_grid = {1, 2, 5, 10, 20};
  std::uint64_t n_trials = 10'000;
  std::uint64_t n_yinf = 10'000;
  std::uint64_t seed = 1;
  int n_sub = 64;
  double eps_A = 1e-12;
  std::uint64_t n_max_claims = 1'000'000;
  double t_max = kInf;
  double u_margin = 0.0;
  unsigned threads = 1;
  std::vector<double> r_grid;  // empty: {0, 0.25, 0.5, 1, 2, 5} x mean interarrival
  bool operator==(const RunConfig&) const = default;
};

struct ExperimentConfig {
  std::string name;
  LevyTriplet investment;
  BusinessSpec business;
  std::optional<SignClass> declared_sign;
  RunConfig run;
  bool operator==(const ExperimentConfig&) const = default;
};

inline SimPolicy sim_policy(const RunConfig& r) {
  SimPolicy p;
  p.n_sub = r.n_sub;
  p.eps_A = r.eps_A;
  p.n_max_claims = r.n_max_claims;
  p.t_max = r.t_max;
  p.u_margin = r.u_margin;
  return p;
}

inline Model make_model(const ExperimentConfig& c) { return make_model(c.investment, c.business); }

inline std::vector<double> r_grid_of(const ExperimentConfig& c, const Model& m) {
  return c.run.r_grid.empty() ? default_r_grid(m) : c.run.r_grid;
}

// All problems found in a configuration, one message per violation.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(ErrorKind::Config, join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& m : v) s += "\n  " + m;
    return s;
  }
  std::vector<std::string> violations_;
};

namespace detail {

using json = nlohmann::json;

class Reader {
 public:
  std::vector<std::string> errors;

  void note(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  // Flags keys outside `allowed`; returns false when `j` is not an object.
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      note(path, "expected an object");
      return false;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) note(path + "." + k, "unknown field");
    return true;
  }

  std::optional<double> number(const json& j, const std::string& path, const char* key, bool required,
                               double fallback = 0.0) {
    if (!j.contains(key) || j[key].is_null()) {
      if (required) note(path + "." + key, "missing required number");
      return required ? std::nullopt : std::optional<double>(fallback);
    }
    if (!j[key].is_number()) {
      note(path + "." + key, "expected a number");
      return std::nullopt;
    }
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) {
      note(path + "." + key, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> count(const json& j, const std::string& path, const char* key,
                                     std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    note(path + "." + key, "expected a nonnegative integer");
    return std::nullopt;
  }

  std::optional<int> sign(const json& j, const std::string& path, const char* key = "sign") {
    if (!j.contains(key)) {
      note(path + "." + key, "missing required sign (+1 or -1)");
      return std::nullopt;
    }
    if (j[key].is_number_integer() && (j[key].get<int>() == 1 || j[key].get<int>() == -1)) return j[key].get<int>();
    note(path + "." + key, "must be +1 or -1");
    return std::nullopt;
  }

  std::optional<std::string> string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) {
      note(path + "." + key, "missing required string");
      return std::nullopt;
    }
    if (!j[key].is_string()) {
      note(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return j[key].get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::vector<double>{};
    if (!j[key].is_array()) {
      note(path + "." + key, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      const json& v = j[key][i];
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        note(path + "." + key + "[" + std::to_string(i) + "]", "expected a finite number");
        ok = false;
      } else {
        out.push_back(v.get<double>());
      }
    }
    return ok ? std::optional(out) : std::nullopt;
  }

  template <class... Opt>
  static bool all(const Opt&... o) {
    return (o.has_value() && ...);
  }

  std::optional<JumpLaw> jump_law(const json& j, const std::string& p) {
    if (!j.is_object() || !j.contains("family")) {
      note(p, "expected an object with a family");
      return std::nullopt;
    }
    const auto fam = string(j, p, "family");
    if (!fam) return std::nullopt;
    if (*fam == "point") {
      if (!object(j, p, {"family", "at"})) return std::nullopt;
      auto at = number(j, p, "at", true);
      if (all(at)) return jump::PointMass{*at};
    } else if (*fam == "exponential") {
      if (!object(j, p, {"family", "sign", "rate"})) return std::nullopt;
      auto s = sign(j, p);
      auto r = number(j, p, "rate", true);
      if (all(s, r)) return jump::Exponential{*s, *r};
    } else if (*fam == "uniform") {
      if (!object(j, p, {"family", "lo", "hi"})) return std::nullopt;
      auto lo = number(j, p, "lo", true), hi = number(j, p, "hi", true);
      if (all(lo, hi)) return jump::Uniform{*lo, *hi};
    } else if (*fam == "normal") {
      if (!object(j, p, {"family", "mean", "sd"})) return std::nullopt;
      auto m = number(j, p, "mean", true), sd = number(j, p, "sd", true);
      if (all(m, sd)) return jump::Normal{*m, *sd};
    } else if (*fam == "two-point") {
      if (!object(j, p, {"family", "at1", "at2", "p1"})) return std::nullopt;
      auto a1 = number(j, p, "at1", true), a2 = number(j, p, "at2", true), p1 = number(j, p, "p1", true);
      if (all(a1, a2, p1)) return jump::TwoPoint{*a1, *a2, *p1};
    } else {
      note(p + ".family", "unknown jump family '" + *fam +
                              "' (point, exponential, uniform, normal, two-point)");
    }
    return std::nullopt;
  }

  std::optional<InterarrivalLaw> interarrival(const json& j, const std::string& p) {
    if (!j.is_object() || !j.contains("family")) {
      note(p, "expected an object with a family");
      return std::nullopt;
    }
    const auto fam = string(j, p, "family");
    if (!fam) return std::nullopt;
    if (*fam == "exponential") {
      if (!object(j, p, {"family", "rate"})) return std::nullopt;
      auto r = number(j, p, "rate", true);
      if (all(r)) return arrival::Exponential{*r};
    } else if (*fam == "gamma") {
      if (!object(j, p, {"family", "shape", "scale"})) return std::nullopt;
      auto k = number(j, p, "shape", true), th = number(j, p, "scale", true);
      if (all(k, th)) return arrival::Gamma{*k, *th};
    } else if (*fam == "deterministic") {
      if (!object(j, p, {"family", "length"})) return std::nullopt;
      auto l = number(j, p, "length", true);
      if (all(l)) return arrival::Deterministic{*l};
    } else if (*fam == "uniform") {
      if (!object(j, p, {"family", "lo", "hi"})) return std::nullopt;
      auto lo = number(j, p, "lo", true), hi = number(j, p, "hi", true);
      if (all(lo, hi)) return arrival::UniformShifted{*lo, *hi};
    } else if (is_heavy_tailed_family(*fam)) {
      note(p + ".family", "heavy-tailed interarrival family '" + *fam +
                              "' rejected: need E[exp(eps T)] < inf for some eps > 0");
    } else {
      note(p + ".family", "unknown interarrival family '" + *fam + "' (exponential, gamma, deterministic, uniform)");
    }
    return std::nullopt;
  }

  std::optional<ClaimLaw> claims(const json& j, const std::string& p) {
    if (!j.is_object() || !j.contains("family")) {
      note(p, "expected an object with a family");
      return std::nullopt;
    }
    const auto fam = string(j, p, "family");
    if (!fam) return std::nullopt;
    if (*fam == "constant") {
      if (!object(j, p, {"family", "value"})) return std::nullopt;
      auto v = number(j, p, "value", true);
      if (all(v)) return claim::Constant{*v};
    } else if (*fam == "exponential") {
      if (!object(j, p, {"family", "sign", "mean"})) return std::nullopt;
      auto s = sign(j, p);
      auto m = number(j, p, "mean", true);
      if (all(s, m)) return claim::Exponential{*s, *m};
    } else if (*fam == "uniform") {
      if (!object(j, p, {"family", "lo", "hi"})) return std::nullopt;
      auto lo = number(j, p, "lo", true), hi = number(j, p, "hi", true);
      if (all(lo, hi)) return claim::Uniform{*lo, *hi};
    } else if (*fam == "two-point") {
      if (!object(j, p, {"family", "v1", "v2", "p1"})) return std::nullopt;
      auto v1 = number(j, p, "v1", true), v2 = number(j, p, "v2", true), p1 = number(j, p, "p1", true);
      if (all(v1, v2, p1)) return claim::TwoPoint{*v1, *v2, *p1};
    } else if (*fam == "exp-mixture") {
      if (!object(j, p, {"family", "p_pos", "mean_pos", "mean_neg"})) return std::nullopt;
      auto pp = number(j, p, "p_pos", true), mp = number(j, p, "mean_pos", true), mn = number(j, p, "mean_neg", true);
      if (all(pp, mp, mn)) return claim::ExpMixture{*pp, *mp, *mn};
    } else if (*fam == "pareto") {
      if (!object(j, p, {"family", "sign", "alpha", "scale"})) return std::nullopt;
      auto s = sign(j, p);
      auto al = number(j, p, "alpha", true), sc = number(j, p, "scale", true);
      if (all(s, al, sc)) return claim::Pareto{*s, *al, *sc};
    } else {
      note(p + ".family",
           "unknown claim family '" + *fam + "' (constant, exponential, uniform, two-point, exp-mixture, pareto)");
    }
    return std::nullopt;
  }
};

inline void check(Reader& rd, const std::string& path, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    rd.note(path, e.what());
  }
}

inline std::optional<SignClass> parse_sign_class(const std::string& s) {
  if (s == "non-life") return SignClass::NonLife;
  if (s == "annuity") return SignClass::Annuity;
  if (s == "mixed") return SignClass::Mixed;
  return std::nullopt;
}

inline std::string syntax_location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& root) {
  using detail::json;
  detail::Reader rd;
  ExperimentConfig cfg;
  if (!rd.object(root, "$", {"schema", "name", "investment", "business", "run"})) throw ConfigError(rd.errors);

  if (auto s = rd.string(root, "$", "schema"); s && *s != kConfigSchema)
    rd.note("$.schema", "unsupported schema '" + *s + "', expected '" + kConfigSchema + "'");
  if (root.contains("name")) {
    if (root["name"].is_string()) cfg.name = root["name"].get<std::string>();
    else rd.note("$.name", "expected a string");
  }

  // investment
  if (!root.contains("investment")) {
    rd.note("$.investment", "missing required object");
  } else if (const json& inv = root["investment"];
             rd.object(inv, "$.investment", {"a", "sigma2", "jumps", "power_measures", "small_jump_band"})) {
    const std::size_t before = rd.errors.size();
    auto a = rd.number(inv, "$.investment", "a", true);
    auto s2 = rd.number(inv, "$.investment", "sigma2", false, 0.0);
    auto band = rd.number(inv, "$.investment", "small_jump_band", false, 1e-2);
    if (a) cfg.investment.a = *a;
    if (s2) cfg.investment.sigma2 = *s2;
    if (band) cfg.investment.small_jump_band = *band;
    if (inv.contains("jumps")) {
      if (!inv["jumps"].is_array()) {
        rd.note("$.investment.jumps", "expected an array");
      } else {
        for (std::size_t i = 0; i < inv["jumps"].size(); ++i) {
          const std::string p = "$.investment.jumps[" + std::to_string(i) + "]";
          const json& jc = inv["jumps"][i];
          if (!rd.object(jc, p, {"rate", "space", "law"})) continue;
          JumpComponent comp;
          auto rate = rd.number(jc, p, "rate", true);
          if (rate) comp.rate = *rate;
          if (jc.contains("space")) {
            const auto sp = rd.string(jc, p, "space");
            if (sp && *sp == "price") comp.space = JumpSpace::Price;
            else if (sp && *sp != "log") rd.note(p + ".space", "must be \"log\" or \"price\"");
          }
          if (!jc.contains("law")) {
            rd.note(p + ".law", "missing required object");
            continue;
          }
          if (auto law = rd.jump_law(jc["law"], p + ".law")) {
            comp.law = *law;
            cfg.investment.jumps.push_back(comp);
          }
        }
      }
    }
    if (inv.contains("power_measures")) {
      if (!inv["power_measures"].is_array()) {
        rd.note("$.investment.power_measures", "expected an array");
      } else {
        for (std::size_t i = 0; i < inv["power_measures"].size(); ++i) {
          const std::string p = "$.investment.power_measures[" + std::to_string(i) + "]";
          const json& pm = inv["power_measures"][i];
          if (!rd.object(pm, p, {"sign", "alpha", "scale", "upper"})) continue;
          auto s = rd.sign(pm, p);
          auto al = rd.number(pm, p, "alpha", true), sc = rd.number(pm, p, "scale", true);
          auto up = rd.number(pm, p, "upper", false, 1.0);
          if (detail::Reader::all(s, al, sc, up)) cfg.investment.power_measures.push_back({*s, *al, *sc, *up});
        }
      }
    }
    if (rd.errors.size() == before) detail::check(rd, "$.investment", [&] { (void)log_price_law(cfg.investment); });
  }

  // business
  if (!root.contains("business")) {
    rd.note("$.business", "missing required object");
  } else if (const json& bus = root["business"];
             rd.object(bus, "$.business", {"c", "interarrival", "claims", "sign_class", "r"})) {
    const std::size_t before = rd.errors.size();
    auto c = rd.number(bus, "$.business", "c", true);
    auto r = rd.number(bus, "$.business", "r", false, 0.0);
    if (c) cfg.business.c = *c;
    if (r) cfg.business.r = *r;
    if (!bus.contains("interarrival")) rd.note("$.business.interarrival", "missing required object");
    else if (auto f = rd.interarrival(bus["interarrival"], "$.business.interarrival")) cfg.business.interarrival = *f;
    if (!bus.contains("claims")) rd.note("$.business.claims", "missing required object");
    else if (auto cl = rd.claims(bus["claims"], "$.business.claims")) cfg.business.claims = *cl;
    if (bus.contains("sign_class")) {
      const auto sc = rd.string(bus, "$.business", "sign_class");
      if (sc) {
        cfg.declared_sign = detail::parse_sign_class(*sc);
        if (!cfg.declared_sign) rd.note("$.business.sign_class", "must be non-life, annuity or mixed");
      }
    }
    if (rd.errors.size() == before) {
      detail::check(rd, "$.business", [&] { validate(cfg.business); });
      if (cfg.declared_sign && *cfg.declared_sign != sign_class(cfg.business.claims))
        rd.note("$.business.sign_class", std::string("declared ") + to_string(*cfg.declared_sign) +
                                             " but the claim law is " + to_string(sign_class(cfg.business.claims)));
    }
  }

  // run
  if (root.contains("run")) {
    const json& run = root["run"];
    if (rd.object(run, "$.run", {"u_grid", "n_trials", "n_yinf", "seed", "n_sub", "eps_A", "n_max_claims", "t_max",
                                 "u_margin", "threads", "r_grid"})) {
      RunConfig& rc = cfg.run;
      if (run.contains("u_grid")) {
        if (auto g = rd.numbers(run, "$.run", "u_grid")) {
          rc.u_grid = *g;
          if (rc.u_grid.empty()) rd.note("$.run.u_grid", "must not be empty");
          for (double u : rc.u_grid)
            if (!(u > 0)) {
              rd.note("$.run.u_grid", "capital levels must be positive");
              break;
            }
        }
      }
      if (auto v = rd.count(run, "$.run", "n_trials", rc.n_trials)) rc.n_trials = *v;
      if (auto v = rd.count(run, "$.run", "n_yinf", rc.n_yinf)) rc.n_yinf = *v;
      if (auto v = rd.count(run, "$.run", "seed", rc.seed)) rc.seed = *v;
      if (auto v = rd.count(run, "$.run", "n_sub", static_cast<std::uint64_t>(rc.n_sub))) {
        if (*v < 1 || *v > 1'000'000) rd.note("$.run.n_sub", "must lie in [1, 10^6]");
        else rc.n_sub = static_cast<int>(*v);
      }
      if (auto v = rd.count(run, "$.run", "n_max_claims", rc.n_max_claims)) rc.n_max_claims = *v;
      if (auto v = rd.count(run, "$.run", "threads", rc.threads)) {
        if (*v < 1 || *v > 1024) rd.note("$.run.threads", "must lie in [1, 1024]");
        else rc.threads = static_cast<unsigned>(*v);
      }
      if (auto v = rd.number(run, "$.run", "eps_A", false, rc.eps_A)) rc.eps_A = *v;
      if (auto v = rd.number(run, "$.run", "u_margin", false, rc.u_margin)) rc.u_margin = *v;
      if (run.contains("t_max") && !run["t_max"].is_null()) {
        if (auto v = rd.number(run, "$.run", "t_max", true)) rc.t_max = *v;
      }
      if (auto g = rd.numbers(run, "$.run", "r_grid")) {
        rc.r_grid = *g;
        for (double r : rc.r_grid)
          if (!(r >= 0)) {
            rd.note("$.run.r_grid", "clock values must be >= 0");
            break;
          }
      }
      if (rc.n_trials < 1) rd.note("$.run.n_trials", "must be >= 1");
      if (rc.n_yinf < 1000) rd.note("$.run.n_yinf", "must be >= 1000");
      detail::check(rd, "$.run", [&] { validate(sim_policy(rc)); });
    }
  }
  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({"syntax error at " + detail::syntax_location(text, e.byte) + ": " + e.what()});
  }
  return config_from_json(root);
}

namespace detail {

inline nlohmann::ordered_json to_json(const JumpLaw& law) {
  struct V {
    nlohmann::ordered_json operator()(const jump::PointMass& l) const { return {{"family", "point"}, {"at", l.at}}; }
    nlohmann::ordered_json operator()(const jump::Exponential& l) const {
      return {{"family", "exponential"}, {"sign", l.sign}, {"rate", l.rate}};
    }
    nlohmann::ordered_json operator()(const jump::Uniform& l) const {
      return {{"family", "uniform"}, {"lo", l.lo}, {"hi", l.hi}};
    }
    nlohmann::ordered_json operator()(const jump::Normal& l) const {
      return {{"family", "normal"}, {"mean", l.mean}, {"sd", l.sd}};
    }
    nlohmann::ordered_json operator()(const jump::TwoPoint& l) const {
      return {{"family", "two-point"}, {"at1", l.at1}, {"at2", l.at2}, {"p1", l.p1}};
    }
    nlohmann::ordered_json operator()(const jump::TruncatedPower& l) const {
      return {{"family", "truncated-power"}, {"sign", l.sign}, {"alpha", l.alpha}, {"lo", l.lo}, {"hi", l.hi}};
    }
  };
  return std::visit(V{}, law);
}

inline nlohmann::ordered_json to_json(const InterarrivalLaw& law) {
  struct V {
    nlohmann::ordered_json operator()(const arrival::Exponential& l) const {
      return {{"family", "exponential"}, {"rate", l.rate}};
    }
    nlohmann::ordered_json operator()(const arrival::Gamma& l) const {
      require(l.elapsed == 0, ErrorKind::Config, "serialize: residual gamma laws are internal");
      return {{"family", "gamma"}, {"shape", l.shape}, {"scale", l.scale}};
    }
    nlohmann::ordered_json operator()(const arrival::Deterministic& l) const {
      return {{"family", "deterministic"}, {"length", l.length}};
    }
    nlohmann::ordered_json operator()(const arrival::UniformShifted& l) const {
      return {{"family", "uniform"}, {"lo", l.lo}, {"hi", l.hi}};
    }
  };
  return std::visit(V{}, law);
}

inline nlohmann::ordered_json to_json(const ClaimLaw& law) {
  struct V {
    nlohmann::ordered_json operator()(const claim::Constant& l) const {
      return {{"family", "constant"}, {"value", l.value}};
    }
    nlohmann::ordered_json operator()(const claim::Exponential& l) const {
      return {{"family", "exponential"}, {"sign", l.sign}, {"mean", l.mean}};
    }
    nlohmann::ordered_json operator()(const claim::Uniform& l) const {
      return {{"family", "uniform"}, {"lo", l.lo}, {"hi", l.hi}};
    }
    nlohmann::ordered_json operator()(const claim::TwoPoint& l) const {
      return {{"family", "two-point"}, {"v1", l.v1}, {"v2", l.v2}, {"p1", l.p1}};
    }
    nlohmann::ordered_json operator()(const claim::ExpMixture& l) const {
      return {{"family", "exp-mixture"}, {"p_pos", l.p_pos}, {"mean_pos", l.mean_pos}, {"mean_neg", l.mean_neg}};
    }
    nlohmann::ordered_json operator()(const claim::Pareto& l) const {
      return {{"family", "pareto"}, {"sign", l.sign}, {"alpha", l.alpha}, {"scale", l.scale}};
    }
  };
  return std::visit(V{}, law);
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  using oj = nlohmann::ordered_json;
  oj inv = {{"a", c.investment.a}, {"sigma2", c.investment.sigma2}};
  if (!c.investment.jumps.empty()) {
    oj arr = oj::array();
    for (const auto& j : c.investment.jumps) {
      oj e = {{"rate", j.rate}};
      if (j.space == JumpSpace::Price) e["space"] = "price";
      e["law"] = detail::to_json(j.law);
      arr.push_back(e);
    }
    inv["jumps"] = arr;
  }
  if (!c.investment.power_measures.empty()) {
    oj arr = oj::array();
    for (const auto& m : c.investment.power_measures)
      arr.push_back({{"sign", m.sign}, {"alpha", m.alpha}, {"scale", m.scale}, {"upper", m.upper}});
    inv["power_measures"] = arr;
    inv["small_jump_band"] = c.investment.small_jump_band;
  } else if (c.investment.small_jump_band != 1e-2) {
    inv["small_jump_band"] = c.investment.small_jump_band;
  }

  oj bus = {{"c", c.business.c},
            {"interarrival", detail::to_json(c.business.interarrival)},
            {"claims", detail::to_json(c.business.claims)}};
  if (c.declared_sign) bus["sign_class"] = to_string(*c.declared_sign);
  if (c.business.r != 0.0) bus["r"] = c.business.r;

  const RunConfig& r = c.run;
  oj run = {{"u_grid", r.u_grid},       {"n_trials", r.n_trials}, {"n_yinf", r.n_yinf},
            {"seed", r.seed},           {"n_sub", r.n_sub},       {"eps_A", r.eps_A},
            {"n_max_claims", r.n_max_claims}};
  if (std::isfinite(r.t_max)) run["t_max"] = r.t_max;
  if (r.u_margin != 0.0) run["u_margin"] = r.u_margin;
  run["threads"] = r.threads;
  if (!r.r_grid.empty()) run["r_grid"] = r.r_grid;

  oj root = {{"schema", kConfigSchema}};
  if (!c.name.empty()) root["name"] = c.name;
  root["investment"] = inv;
  root["business"] = bus;
  root["run"] = run;
  return root;
}

inline std::string serialize(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace ruinlab
