#pragma once

#include <stdexcept>
#include <string>

namespace horoeq {

enum class Errc {
  NotCoprime,
  PrimeDividesModulus,
  NonPositiveDiagonal,
  NumericalDegeneracy,
  Overflow,
  RadiusTooLarge,
  InvalidArgument,
  EmptySet,
  InsufficientData,
  NoPrimesAvailable,
  NotExpanding,
  InvariantViolation,
  ConfigInvalid,
  ResourceExhausted,
  NoData,
  Io,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::PrimeDividesModulus: return "PrimeDividesModulus";
    case Errc::NonPositiveDiagonal: return "NonPositiveDiagonal";
    case Errc::NumericalDegeneracy: return "NumericalDegeneracy";
    case Errc::Overflow: return "Overflow";
    case Errc::RadiusTooLarge: return "RadiusTooLarge";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptySet: return "EmptySet";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NoPrimesAvailable: return "NoPrimesAvailable";
    case Errc::NotExpanding: return "NotExpanding";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::ResourceExhausted: return "ResourceExhausted";
    case Errc::NoData: return "NoData";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace horoeq
