#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace xphase {

enum class ErrorKind {
  validation,          // invariant violated on a value type
  lexical,             // bad character / malformed number in an expression
  syntax,              // grammar violation, carries a byte offset
  unknown_identifier,  // identifier is not a variable, parameter or function
  semantic,            // statically invalid expression (e.g. constant zero denominator)
  unbound_parameter,   // evaluation met a parameter with no bound value
  non_finite,          // a computation produced NaN/Inf
  dimension_mismatch,  // vector/matrix sizes disagree
  newton_nonconvergence,
  singular_jacobian,
  domain,              // input outside the mathematical domain (e.g. |V| >= c)
  schema,              // scenario file violates the schema, carries the offending key
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::lexical: return "lexical";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::unknown_identifier: return "unknown_identifier";
    case ErrorKind::semantic: return "semantic";
    case ErrorKind::unbound_parameter: return "unbound_parameter";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::newton_nonconvergence: return "newton_nonconvergence";
    case ErrorKind::singular_jacobian: return "singular_jacobian";
    case ErrorKind::domain: return "domain";
    case ErrorKind::schema: return "schema";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Error(ErrorKind kind, const std::string& message, std::size_t offset)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}

  // scenario-layer errors name the offending config key
  static Error keyed(ErrorKind kind, const std::string& key, const std::string& message) {
    Error e(kind, message);
    e.key_ = key;
    return e;
  }

  ErrorKind kind() const { return kind_; }
  const std::optional<std::size_t>& offset() const { return offset_; }
  const std::string& key() const { return key_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
  std::string key_;
};

}  // namespace xphase
