#pragma once

#include <stdexcept>
#include <string>

namespace ringbumps {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSize : Error { using Error::Error; };
struct UnsupportedDerivative : Error { using Error::Error; };
struct NoNonzeroSolution : Error { using Error::Error; };
struct NoFixedPoint : Error { using Error::Error; };
struct UnstableBranch : Error { using Error::Error; };
struct InvalidTime : Error { using Error::Error; };
struct NumericalBlowup : Error { using Error::Error; };
struct TooFarFromManifold : Error { using Error::Error; };
struct OutsideBasin : Error { using Error::Error; };
struct TraceUnreliable : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct SweepDegraded : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace ringbumps
