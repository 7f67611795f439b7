#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace transportq {

enum class Errc {
  dimension,  // incompatible operand shapes
  domain,     // argument outside the admissible range
  numerical,  // a computed quantity violated a numerical tolerance
  config,     // malformed or invalid configuration
};

/// Single exception type for the library; `code()` classifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// Same error with `context` prepended to the message.
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + what());
  }

 private:
  Errc code_;
};

/// Short scientific rendering for diagnostics.
inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline Error dimension_error(const std::string& what) { return Error(Errc::dimension, what); }
inline Error domain_error(const std::string& what) { return Error(Errc::domain, what); }
inline Error numerical_error(const std::string& what) { return Error(Errc::numerical, what); }
inline Error config_error(const std::string& what) { return Error(Errc::config, what); }

}  // namespace transportq
