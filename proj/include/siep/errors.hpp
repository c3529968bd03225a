#ifndef SIEP_ERRORS_HPP
#define SIEP_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace siep {

enum class ErrorKind {
  JacobianSingular,
  NoConvergence,
  BudgetInfeasible,
  WspLost,
  EigenvalueCollision,
  DuplicateEigenvalues,
  SequenceExhausted,
  StreamExhausted,
  InvalidArgument,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::JacobianSingular: return "JacobianSingular";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::BudgetInfeasible: return "BudgetInfeasible";
    case ErrorKind::WspLost: return "WspLost";
    case ErrorKind::EigenvalueCollision: return "EigenvalueCollision";
    case ErrorKind::DuplicateEigenvalues: return "DuplicateEigenvalues";
    case ErrorKind::SequenceExhausted: return "SequenceExhausted";
    case ErrorKind::StreamExhausted: return "StreamExhausted";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Solver failure. `step()` is the order of the matrix being built when the
/// failure happened, if known.
class SiepError : public std::runtime_error {
 public:
  SiepError(ErrorKind kind, const std::string& what, std::optional<long> step = std::nullopt)
      : std::runtime_error(compose(kind, what, step)), kind_(kind), step_(step) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<long> step() const noexcept { return step_; }

  SiepError at_step(long step) const {
    if (step_) return *this;
    return SiepError(kind_, detail_of(what()), step);
  }

 private:
  static std::string compose(ErrorKind kind, const std::string& what, std::optional<long> step) {
    std::string s = std::string(to_string(kind)) + ": " + what;
    if (step) s += " (step " + std::to_string(*step) + ")";
    return s;
  }
  static std::string detail_of(const std::string& full) {
    const auto pos = full.find(": ");
    return pos == std::string::npos ? full : full.substr(pos + 2);
  }

  ErrorKind kind_;
  std::optional<long> step_;
};

}  // namespace siep

#endif  // SIEP_ERRORS_HPP
