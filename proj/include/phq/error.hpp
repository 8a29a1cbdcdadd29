// Error type shared across the toolkit. Every failure carries a kind so the
// CLI can map it onto a stable exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace phq {

enum class ErrorKind {
  kArgument,    // bad CLI flag or config value
  kConfig,      // malformed or unknown config key
  kIo,          // file missing / unreadable / unwritable
  kFormat,      // malformed file contents (carries line/row in message)
  kDimension,   // tensor shape mismatch
  kParameter,   // invalid numeric parameter (p >= 1, negative Hz, ...)
  kLabel,       // label outside its domain
  kState,       // operation invoked in an invalid state
  kInput,       // invalid runtime input (empty clip, empty token list)
  kIngestion,   // interview-level loading failure
  kCheckpoint,  // checkpoint magic/version/truncation problems
  kAggregation, // patient aggregation on empty data
  kTraining     // non-finite loss abort
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace phq
