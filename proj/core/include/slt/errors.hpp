#pragma once

#include <stdexcept>
#include <string>

namespace slt {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {      // geometry or argument out of range
  using Error::Error;
};
struct CatalogError : Error {     // bad catalog entry / non-finite evaluation
  using Error::Error;
};
struct MeshError : Error {        // time or space mesh mismatch
  using Error::Error;
};
struct RangeError : Error {       // numeric overflow (|log F| beyond exp range)
  using Error::Error;
};
struct StatError : Error {        // sample too small for a meaningful CI
  using Error::Error;
};
struct ResolutionError : Error {  // kernel under-resolved on the grid
  using Error::Error;
};
struct ConfigError : Error {      // invalid experiment configuration
  using Error::Error;
};
struct RunError : Error {         // too many failed Monte-Carlo paths
  using Error::Error;
};
struct BlowupError : Error {      // characteristic left the safety box
  using Error::Error;
};
struct EllipticError : Error {    // pressure solve did not converge
  using Error::Error;
};
struct ConditionError : Error {   // near-singular mobility field
  using Error::Error;
};
struct StepSizeError : Error {    // CFL-degenerate explicit step
  using Error::Error;
};

}  // namespace slt
