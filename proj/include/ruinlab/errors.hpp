#pragma once

#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ruinlab {

enum class ErrorKind {
  InvalidModel,
  Domain,
  NoPositiveRoot,
  DegenerateInvestment,
  RootAtBoundary,
  NoConvergence,
  DegenerateResidual,
  CensoredSample,
  DegenerateInput,
  Precondition,
  Config,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorKind::DegenerateInvestment: return "DegenerateInvestment";
    case ErrorKind::RootAtBoundary: return "RootAtBoundary";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateResidual: return "DegenerateResidual";
    case ErrorKind::CensoredSample: return "CensoredSample";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when an argument leaves the effective domain of a cumulant or MGF.
// `stage` names the function that failed ("levy_exponent", "interarrival_mgf", ...).
class DomainError : public Error {
 public:
  DomainError(std::string stage, double arg, double lo, double hi)
      : Error(ErrorKind::Domain, describe(stage, arg, lo, hi)),
        stage_(std::move(stage)), arg_(arg), lo_(lo), hi_(hi) {}

  const std::string& stage() const noexcept { return stage_; }
  double argument() const noexcept { return arg_; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

 private:
  static std::string describe(const std::string& stage, double arg, double lo, double hi) {
    std::ostringstream os;
    os.precision(17);
    os << stage << ": argument " << arg << " outside domain (" << lo << ", " << hi << ")";
    return os.str();
  }

  std::string stage_;
  double arg_, lo_, hi_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace ruinlab
