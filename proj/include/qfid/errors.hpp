#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qfid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The band gap |d| vanished (or fell below the gap tolerance) so no ground
/// state is defined. Carries the offending momentum when one is known.
class GapClosed : public Error {
 public:
  explicit GapClosed(const std::string& what, std::optional<double> k = std::nullopt)
      : Error(what), k_(k) {}

  std::optional<double> momentum() const { return k_; }

 private:
  std::optional<double> k_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A parameter sits on a critical line where the decoupled boundary modes
/// have no defined occupation.
class CriticalBoundary : public Error {
 public:
  using Error::Error;
};

class NonIntegerResult : public Error {
 public:
  NonIntegerResult(const std::string& what, double raw) : Error(what), raw_(raw) {}
  double raw() const { return raw_; }

 private:
  double raw_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message, int line = -1)
      : Error(format(field, message, line)), field_(field), line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out = "config field '" + field + "'";
    if (line >= 0) out += " (line " + std::to_string(line + 1) + ")";
    return out + ": " + message;
  }

  std::string field_;
  int line_;
};

}  // namespace qfid
