#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qg {

// Domain error with a stable machine-readable name (e.g. "MissingCoalition").
// The CLI maps these to exit code 1 and prints name + message.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

[[noreturn]] inline void fail(std::string name, const std::string& message) {
  throw Error(std::move(name), message);
}

}  // namespace qg
