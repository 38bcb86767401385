#pragma once

#include <stdexcept>
#include <string>

namespace muscu {

/// A scenario violates one of the structural assumptions of the model.
/// `assumption()` names the failed check so callers can report it.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string assumption, const std::string& detail)
      : std::runtime_error(assumption + ": " + detail), assumption_(std::move(assumption)) {}

  const std::string& assumption() const noexcept { return assumption_; }

private:
  std::string assumption_;
};

}  // namespace muscu
