#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cantrans {

enum class ErrorKind {
  invalid_base,
  undefined_valuation,
  invalid_prime,
  configuration,
  oracle_scale,
  insufficient_data,
  internal_consistency,
  invalid_polynomial,
  isolation,
  division_by_zero,
  precision,
  boundary_undecidable,
  invalid_parameters,
  witness_not_found,
  parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace cantrans
