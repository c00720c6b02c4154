#pragma once

#include <stdexcept>
#include <string>

namespace kronload {

// Process exit codes used by the command-line tool; every library error
// carries one so the CLI can map exceptions without a type switch.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  domain = 2,
  verification = 3,
  resource = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad partition text, size mismatch, non-convergence, degenerate input.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ExitCode::domain, what) {}
};

// Budget refusals: memory limits, expensive n without --long.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ExitCode::resource, what) {}
};

// Internal arithmetic invariant violated (e.g. a character sum not divisible
// by n!). Indicates a bug or corrupted table rather than bad input.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ExitCode::domain, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ExitCode::usage, what) {}
};

}  // namespace kronload
