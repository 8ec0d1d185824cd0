#pragma once

#include <stdexcept>
#include <string>

namespace multispec {

// A configurable resource limit (enumeration depth, dense matrix size) was hit.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace multispec
