#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

enum class ErrorKind {
  EmptySet,
  DivisorZero,
  ResourceLimit,
  ZeroInMultiplicativeEnergy,
  NotWellSpaced,
  NoValidPrimorial,
  DensityFailure,
  SignRestriction,
  Degenerate,
  InvalidPair,
  InvalidQuadruple,
  InvalidClusterWidth,
  InsufficientData,
  InputFormat,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure the library reports carries one of the kinds above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::DivisorZero: return "DivisorZero";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::ZeroInMultiplicativeEnergy: return "ZeroInMultiplicativeEnergy";
    case ErrorKind::NotWellSpaced: return "NotWellSpaced";
    case ErrorKind::NoValidPrimorial: return "NoValidPrimorial";
    case ErrorKind::DensityFailure: return "DensityFailure";
    case ErrorKind::SignRestriction: return "SignRestriction";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::InvalidPair: return "InvalidPair";
    case ErrorKind::InvalidQuadruple: return "InvalidQuadruple";
    case ErrorKind::InvalidClusterWidth: return "InvalidClusterWidth";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::InputFormat: return "InputFormat";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sumprod
