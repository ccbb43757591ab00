#include "nbc/errors.hpp"

namespace nbc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::lex: return "lex-error";
    case ErrorCode::parse: return "parse-error";
    case ErrorCode::io: return "io-error";
    case ErrorCode::domain: return "domain-error";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::pseudo_arc: return "pseudo-arc-violation";
    case ErrorCode::degenerate: return "degenerate-curve";
    case ErrorCode::condition: return "condition-failed";
    case ErrorCode::no_solution: return "no-solution";
    case ErrorCode::range: return "range-error";
    case ErrorCode::quadrature: return "quadrature-error";
    case ErrorCode::invalid_params: return "invalid-params";
  }
  return "unknown-error";
}

}  // namespace nbc
