#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussharm {

/// Failure kinds raised by the library. Grouped by how the CLI reports them.
enum class Errc {
  // document problems
  ParseError,
  SchemaError,
  DimensionError,
  UnknownBuiltin,
  // precondition violations
  DimensionMismatch,
  NotAntisymmetric,
  NotSymmetric,
  NotPositiveDefinite,
  RankDeficient,
  NotContained,
  NotClosed,
  NotBiinvariant,
  NotSubalgebra,
  SplitFailed,
  NotSemisimple,
  NotLieTriple,
  FrameNotOrthonormal,
  NoWitness,
  NotTwoStep,
  NotCentral,
  ZeroVector,
  InvalidArgument,
  // numerical failures
  DegenerateLambda,
  NumericalFailure,
};

enum class ErrorCategory { Document, Precondition, Numerical };

constexpr std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DimensionError: return "DimensionError";
    case Errc::UnknownBuiltin: return "UnknownBuiltin";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NotAntisymmetric: return "NotAntisymmetric";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NotContained: return "NotContained";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotBiinvariant: return "NotBiinvariant";
    case Errc::NotSubalgebra: return "NotSubalgebra";
    case Errc::SplitFailed: return "SplitFailed";
    case Errc::NotSemisimple: return "NotSemisimple";
    case Errc::NotLieTriple: return "NotLieTriple";
    case Errc::FrameNotOrthonormal: return "FrameNotOrthonormal";
    case Errc::NoWitness: return "NoWitness";
    case Errc::NotTwoStep: return "NotTwoStep";
    case Errc::NotCentral: return "NotCentral";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateLambda: return "DegenerateLambda";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

constexpr ErrorCategory category(Errc e) {
  switch (e) {
    case Errc::ParseError:
    case Errc::SchemaError:
    case Errc::DimensionError:
    case Errc::UnknownBuiltin:
      return ErrorCategory::Document;
    case Errc::DegenerateLambda:
    case Errc::NumericalFailure:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Precondition;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gaussharm
