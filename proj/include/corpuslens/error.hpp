#pragma once

#include <stdexcept>
#include <string>

namespace corpuslens {

/// Error raised by any toolkit module. `what()` is prefixed with the module
/// name so pipeline failures point at the stage that produced them.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(std::move(module)), message_(message) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string module_;
  std::string message_;
};

}  // namespace corpuslens
