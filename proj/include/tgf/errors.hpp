#pragma once

#include <stdexcept>
#include <string>

namespace tgf {

/// NaN or Inf in a time-stepped solution; step is the first bad snapshot index.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& where, int step)
      : std::runtime_error(where + ": non-finite value at step " + std::to_string(step)), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Armijo backtracking drove the step below its floor.
class StepCollapseError : public std::runtime_error {
 public:
  StepCollapseError(int iteration, double step)
      : std::runtime_error("optimizer: step collapsed to " + std::to_string(step) + " at iteration " +
                           std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Invalid configuration; key is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error("config error at '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace tgf
