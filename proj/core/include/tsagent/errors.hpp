#pragma once

#include <stdexcept>
#include <string>

namespace tsagent {

/// Bad or inconsistent run configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, malformed, or too-short data. CLI exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Remote endpoint unreachable, timed out, or replied out of contract. CLI exit code 4.
class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tsagent
