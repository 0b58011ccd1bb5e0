#pragma once

#include <stdexcept>
#include <string>

namespace qmarl {

// Sampled outcome has (numerically) zero probability; the caller must not
// build a log-gradient update from it.
class DegenerateOutcomeError : public std::runtime_error {
public:
    explicit DegenerateOutcomeError(const std::string& what)
        : std::runtime_error(what) {}
};

// Non-finite loss or gradient during training.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
          step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

// Configuration file problems, reported with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field_(field_path) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace qmarl
