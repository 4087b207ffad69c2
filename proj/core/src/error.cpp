#include "cpc/error.hpp"

namespace cpc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::empty_question: return "empty question";
    case ErrorCode::empty_context: return "empty context";
    case ErrorCode::empty_answer: return "empty answer";
    case ErrorCode::empty_gold: return "empty gold set";
    case ErrorCode::zero_budget: return "zero budget";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::degenerate_span: return "degenerate span";
    case ErrorCode::context_overflow: return "context overflow";
    case ErrorCode::transport: return "transport error";
    case ErrorCode::rate_limit: return "rate limited";
    case ErrorCode::unsupported_provider: return "unsupported provider";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::ambiguous_verdict: return "ambiguous verdict";
    case ErrorCode::non_finite_loss: return "non-finite loss";
    case ErrorCode::validation: return "validation failure";
    case ErrorCode::io: return "io error";
  }
  return "error";
}

}  // namespace cpc
