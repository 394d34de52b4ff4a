#pragma once
#include <stdexcept>
#include <string>

namespace limlab {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Escalation ran past the available universe; carries the size that would
// have been needed to finish.
struct UniverseTooSmall : std::runtime_error {
  int required;
  UniverseTooSmall(const std::string& msg, int required_size)
      : std::runtime_error(msg), required(required_size) {}
};

}  // namespace limlab
