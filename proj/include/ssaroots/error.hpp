#ifndef SSAROOTS_ERROR_HPP
#define SSAROOTS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ssaroots {

enum class ErrorKind {
  InvalidArgument,
  ZeroPolynomial,
  ConstantPolynomial,
  RootAtZero,
  ZeroLeadCoefficient,
  InvalidFrequency,
  WindowOutOfRange,
  WindowTooSmall,
  RankDeficient,
  EmptyBasis,
  RealRoot,
  Verticality,
  SingularSystem,
  PoleEvaluation,
  TooFewRoots,
  ConfigInvalid,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::ConstantPolynomial: return "ConstantPolynomial";
    case ErrorKind::RootAtZero: return "RootAtZero";
    case ErrorKind::ZeroLeadCoefficient: return "ZeroLeadCoefficient";
    case ErrorKind::InvalidFrequency: return "InvalidFrequency";
    case ErrorKind::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::EmptyBasis: return "EmptyBasis";
    case ErrorKind::RealRoot: return "RealRoot";
    case ErrorKind::Verticality: return "Verticality";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::TooFewRoots: return "TooFewRoots";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by the numbers rather than by the request.
  bool is_numerical() const noexcept {
    switch (kind_) {
      case ErrorKind::RankDeficient:
      case ErrorKind::Verticality:
      case ErrorKind::SingularSystem:
      case ErrorKind::PoleEvaluation:
      case ErrorKind::TooFewRoots:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace ssaroots

#endif  // SSAROOTS_ERROR_HPP
