#pragma once

#include <stdexcept>
#include <string>

namespace mrpp {

// Statistical failure on valid input (e.g. a test applied to all-zero data).
// Kept distinct from std::domain_error (caller broke a precondition) and
// ConfigError (bad file or configuration) so the CLI can map exit codes.
class StatError : public std::runtime_error {
public:
    explicit StatError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration, unreadable file, or inconsistent options.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mrpp
