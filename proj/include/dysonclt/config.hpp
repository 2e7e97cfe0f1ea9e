#pragma once

#include <stdexcept>
#include <string>

#include "dysonclt/montecarlo.hpp"

namespace dysonclt {

// Config rejection carrying the JSON-pointer-style path of the offending
// field, e.g. "/observables/2/k".
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

// Parses the versioned experiment-config JSON (schema 1) and cross-validates
// the result (set references, grid times, sample counts).  See README for the
// schema; presets/ holds working examples.
ExperimentConfig parse_experiment_config(const std::string& json_text);

// Same, reading the file at `path`; a missing or unreadable file throws
// ConfigError with path "/".
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace dysonclt
