#include "bratteli/error.hpp"

namespace bratteli {

const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::VertexNotFound: return "vertex-not-found";
    case Errc::EdgeNotFound: return "edge-not-found";
    case Errc::LevelOutOfRange: return "level-out-of-range";
    case Errc::NonAdjacentLevels: return "non-adjacent-levels";
    case Errc::LevelOrderViolation: return "level-order-violation";
    case Errc::ThermalDataMissing: return "thermal-data-missing";
    case Errc::InfinitePartitionFunction: return "infinite-partition-function";
    case Errc::DimensionLimitExceeded: return "dimension-limit-exceeded";
    case Errc::InadmissibleGauge: return "inadmissible-gauge";
    case Errc::MassOnInfiniteVertex: return "mass-on-infinite-vertex";
    case Errc::InvalidCylinder: return "invalid-cylinder";
    case Errc::ZeroMassVertexReached: return "zero-mass-vertex-reached";
    case Errc::BetaZero: return "beta-zero";
    case Errc::InvalidLink: return "invalid-link";
    case Errc::GraphMismatch: return "graph-mismatch";
    case Errc::ParameterOutOfRange: return "parameter-out-of-range";
    case Errc::DepthLimit: return "depth-limit";
    case Errc::NumericModeConflict: return "numeric-mode-conflict";
    case Errc::ParseError: return "parse-error";
    case Errc::IoError: return "io-error";
    case Errc::InvalidArgument: return "invalid-argument";
  }
  return "unknown-error";
}

}  // namespace bratteli
