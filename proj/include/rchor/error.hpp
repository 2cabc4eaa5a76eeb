#pragma once

#include <stdexcept>
#include <string>

namespace rchor {

enum class ErrorKind {
  ProjectionUndefined,
  BudgetExhausted,
  DuplicateBinding,
  UnboundVariable,
  StaleRedex,
  StateBudgetExceeded,
  NotCoinitial,
  ResidualMissing,
  NotFirstOrder,
  SyntaxError,
  UnresolvedRole,
  InvalidInput,
  EngineError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ProjectionUndefined: return "ProjectionUndefined";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::DuplicateBinding: return "DuplicateBinding";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::StaleRedex: return "StaleRedex";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::NotCoinitial: return "NotCoinitial";
    case ErrorKind::ResidualMissing: return "ResidualMissing";
    case ErrorKind::NotFirstOrder: return "NotFirstOrder";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedRole: return "UnresolvedRole";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::EngineError: return "EngineError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rchor
