// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace rissat {

enum class ErrorKind {
  Domain,     // argument outside its mathematical domain
  Geometry,   // degenerate node placement
  Dimension,  // vector/matrix shape mismatch
  Parse,      // malformed config text
  Validation, // config parsed but a field is invalid
  Experiment, // a table failed to compute
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Validation failure that names the offending config field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& reason)
      : Error(ErrorKind::Validation, field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

} // namespace rissat
