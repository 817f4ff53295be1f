#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spanauto {

/// Failure categories. The CLI prints the code as a machine-readable prefix.
enum class ErrorCode {
  input,            // malformed document or argument
  mismatch,         // composing morphisms whose middle sets differ
  unknown_element,  // label not present in a finite set
  overflow,         // natural-number arithmetic left the uint64 range
  bound_exceeded,   // a configured size or length cap was hit
  not_natural,      // simulation data fails its naturality precondition
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

using Nat = std::uint64_t;

inline Nat checked_add(Nat a, Nat b) {
  Nat r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorCode::overflow, "natural-number addition overflow");
  return r;
}

inline Nat checked_mul(Nat a, Nat b) {
  Nat r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorCode::overflow, "natural-number multiplication overflow");
  return r;
}

}  // namespace spanauto
