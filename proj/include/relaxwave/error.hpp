#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relaxwave {

enum class Errc {
  NonSquare,
  NumericalFailure,
  ZeroDenominator,
  PostconditionFailure,
  ClusterAmbiguous,
  ConditionViolation,
  BranchExtractionFailure,
  ReductionMissing,
  MissingPj1,
  DomainTooSmall,
  DegenerateFit,
  FitFailure,
  ParseError,
  ShapeError,
  ValueError,
  InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace relaxwave
