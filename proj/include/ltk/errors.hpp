#pragma once

#include <stdexcept>
#include <string>

namespace ltk {

// Every failure raised by the library derives from Error. kind() is a stable
// machine-readable tag surfaced by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LTK_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(tag, what) {}      \
  };

LTK_DEFINE_ERROR(InvalidUnitError, "invalid-unit")
LTK_DEFINE_ERROR(PrecisionError, "precision")
LTK_DEFINE_ERROR(DomainError, "domain")
LTK_DEFINE_ERROR(CompositionError, "composition-domain")
LTK_DEFINE_ERROR(ReversionError, "reversion")
LTK_DEFINE_ERROR(LevelError, "level")
LTK_DEFINE_ERROR(ConstructionError, "construction")
LTK_DEFINE_ERROR(PoleError, "pole")
LTK_DEFINE_ERROR(DivergenceError, "divergence")
LTK_DEFINE_ERROR(ConductorError, "conductor")
LTK_DEFINE_ERROR(AdmissibilityError, "admissibility")
LTK_DEFINE_ERROR(StabilityError, "stability")
LTK_DEFINE_ERROR(MissingDataError, "missing-data")
LTK_DEFINE_ERROR(ExcludedCharacterError, "excluded-character")
LTK_DEFINE_ERROR(MalformedInputError, "malformed-input")
LTK_DEFINE_ERROR(SchemaError, "schema")

// Raised when two independent computational routes disagree. Never expected
// to fire; the CLI maps it to exit status 3.
LTK_DEFINE_ERROR(ConsistencyError, "consistency")

#undef LTK_DEFINE_ERROR

}  // namespace ltk
