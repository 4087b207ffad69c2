#pragma once

#include <stdexcept>
#include <string>

namespace cpc {

enum class ErrorCode {
  invalid_argument,
  empty_question,
  empty_context,
  empty_answer,
  empty_gold,
  zero_budget,
  dimension_mismatch,
  degenerate_span,
  context_overflow,
  transport,
  rate_limit,   // retryable
  unsupported_provider,
  parse,
  ambiguous_verdict,
  non_finite_loss,
  validation,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  bool retryable() const noexcept { return code_ == ErrorCode::rate_limit; }

 private:
  ErrorCode code_;
};

}  // namespace cpc
