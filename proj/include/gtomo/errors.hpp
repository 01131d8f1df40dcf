#pragma once

#include <stdexcept>
#include <string>

namespace gtomo {

/// Raised when inputs violate a documented contract (bad graph spec, shape
/// mismatch, out-of-range parameter). Carries a machine-checkable code so
/// callers and tests can distinguish failure kinds.
class ValidationError : public std::runtime_error {
public:
  enum class Code {
    duplicate_id,
    self_loop,
    unknown_vertex,
    isolated_boundary,
    disconnected_interior,
    empty_sources,
    empty_receivers,
    sources_not_boundary,
    receivers_not_boundary,
    bad_schema,
    shape_mismatch,
    series_cap_exceeded,
    bad_phantom,
    bad_structure,
    precondition,
  };

  ValidationError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const noexcept { return code_; }

private:
  Code code_;
};

/// Raised when a linear solve or factorization fails its residual check.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gtomo
