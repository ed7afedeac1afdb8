#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace plantutor {

struct SourceLocation {
  int line = 1;
  int column = 1;
};

// Raised for malformed or unsupported PDDL input. what() renders as
// "file:line:col: message".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, SourceLocation location, std::string message)
      : std::runtime_error(file + ":" + std::to_string(location.line) + ":" +
                           std::to_string(location.column) + ": " + message),
        file_(std::move(file)),
        location_(location),
        message_(std::move(message)) {}

  const std::string& file() const { return file_; }
  SourceLocation location() const { return location_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  SourceLocation location_;
  std::string message_;
};

// A plan step that does not name a schema/objects of the task. Distinct from
// a semantic failure (unmet preconditions), which is reported, not thrown.
class ResolveError : public std::runtime_error {
 public:
  explicit ResolveError(const std::string& message) : std::runtime_error(message) {}
  ResolveError(std::size_t step_index, const std::string& message)
      : std::runtime_error("step " + std::to_string(step_index + 1) + ": " + message),
        step_index_(step_index) {}

  // 0-based index of the offending plan step, when the error came from a plan.
  std::optional<std::size_t> step_index() const { return step_index_; }

 private:
  std::optional<std::size_t> step_index_;
};

// Bad bundle, semantic map, or service configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plantutor
