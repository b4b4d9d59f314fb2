#pragma once

#include <stdexcept>
#include <string>

namespace bratteli {

// Every failure mode the library reports. The CLI maps these onto its
// exit-code contract (parse 2, validation 3, numeric-mode 4, io 5).
enum class Errc {
  VertexNotFound,
  EdgeNotFound,
  LevelOutOfRange,
  NonAdjacentLevels,
  LevelOrderViolation,
  ThermalDataMissing,
  InfinitePartitionFunction,
  DimensionLimitExceeded,
  InadmissibleGauge,
  MassOnInfiniteVertex,
  InvalidCylinder,
  ZeroMassVertexReached,
  BetaZero,
  InvalidLink,
  GraphMismatch,
  ParameterOutOfRange,
  DepthLimit,
  NumericModeConflict,
  ParseError,
  IoError,
  InvalidArgument,
};

// Stable kebab-case name, e.g. "vertex-not-found". Used in error JSON.
const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bratteli
