#pragma once

#include <stdexcept>
#include <string>

namespace bnsl {

/// Invalid configuration or contract violation (bad network spec, n < 3, ...).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// File or stream failure, including parse errors of external formats.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration bound was exceeded (ES d-bit cap, expected-dataset state cap).
class CapError : public std::runtime_error {
  public:
    explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bnsl
