#pragma once

#include <stdexcept>
#include <string>

namespace dsrig {

/// Base class for every failure raised by the library. `kind()` is the
/// stable name used in reports and CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DSRIG_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

// symfun
DSRIG_DEFINE_ERROR(DimensionMismatch)
DSRIG_DEFINE_ERROR(NonHyperbolic)
DSRIG_DEFINE_ERROR(NotInCone)
DSRIG_DEFINE_ERROR(InvalidOperator)
// ambient
DSRIG_DEFINE_ERROR(OffShell)
DSRIG_DEFINE_ERROR(PolarDegeneracy)
DSRIG_DEFINE_ERROR(ChartPole)
// hypersurface
DSRIG_DEFINE_ERROR(NonSpacelike)
DSRIG_DEFINE_ERROR(NotAGraph)
// integrals
DSRIG_DEFINE_ERROR(GateFailed)
DSRIG_DEFINE_ERROR(CorrespondenceInvalid)
// cli
DSRIG_DEFINE_ERROR(ConfigError)
DSRIG_DEFINE_ERROR(ParseError)

#undef DSRIG_DEFINE_ERROR

}  // namespace dsrig
