#pragma once

#include <stdexcept>
#include <string>

namespace brt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct NotHitting : Error { using Error::Error; };
struct DegenerateChild : Error { using Error::Error; };
struct InvalidPolytope : Error { using Error::Error; };

// sampling / kernels
struct ZeroMass : Error { using Error::Error; };
struct CellNotAlive : Error { using Error::Error; };
struct NonModerate : Error { using Error::Error; };

// simulation
struct BudgetExceeded : Error { using Error::Error; };
struct InconsistentBoundary : Error { using Error::Error; };
struct UnknownCell : Error { using Error::Error; };

// estimation
struct InsufficientMargin : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct NegativeInput : Error { using Error::Error; };
struct Diverged : Error { using Error::Error; };

// io
struct ConfigError : Error { using Error::Error; };
struct LogFormatError : Error { using Error::Error; };

} // namespace brt
