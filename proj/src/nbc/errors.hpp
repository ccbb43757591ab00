#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbc {

// Failure categories used across the library.  Each value maps 1:1 onto a
// status code of the public C ABI (see include/nbc/nbc.h), so new values must
// be appended there as well.
enum class ErrorCode {
  invalid_argument,  // null pointer, bad handle, violated call precondition
  lex,               // unexpected character while tokenizing an expression
  parse,             // malformed expression or curve-spec document
  io,                // file could not be read or written
  domain,            // math domain error: sqrt/ln of non-positive, division by zero
  out_of_domain,     // curve evaluated outside its declared parameter interval
  pseudo_arc,        // curve is not parametrized by pseudo-arc (or is not null)
  degenerate,        // Cartan frame undefined: curve does not span 4 dimensions
  condition,         // Bertrand condition violated; no mate for these constants
  no_solution,       // least-squares constant fit has no admissible solution
  range,             // arc-length inversion target exceeds the remaining domain
  quadrature,        // integrand invalid (non-positive) or tolerance not reached
  invalid_params,    // example-family parameters violate their constraints
};

const char* error_code_name(ErrorCode code);

// Single exception type carrying a category, a human-readable message and an
// optional 0-based character position (meaningful for lex/parse errors).
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorCode code, std::string message, std::size_t position = npos)
      : std::runtime_error(std::move(message)), code_(code), position_(position) {}

  ErrorCode code() const { return code_; }
  std::size_t position() const { return position_; }

 private:
  ErrorCode code_;
  std::size_t position_;
};

[[noreturn]] inline void throw_error(ErrorCode code, std::string message,
                                     std::size_t position = Error::npos) {
  throw Error(code, std::move(message), position);
}

}  // namespace nbc
