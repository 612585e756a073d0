#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

enum class ErrorCode {
  Unbounded,
  EmptyInterior,
  RedundantSigma,
  VanishingFacet,
  NonManifoldBoundary,
  NotClose,
  NoConvergence,
  AmbiguousMatch,
  OriginArgument,
  NoDescent,
  InvalidInput,
};

const char* error_code_name(ErrorCode code);

// Carries a machine-readable code plus an optional index (e.g. which facet
// vanished) so the CLI can emit structured diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int index = -1)
      : std::runtime_error(message), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  int index() const { return index_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
  int index_;
};

}  // namespace wulff
