#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zsurj {

// A shape or configuration that would exceed desk-scale resources
// (e.g. an adversarial prime set too large to enumerate).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line, std::size_t column)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

// Invalid experiment configuration; names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error("config key \"" + key + "\": " + message), key_(key) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

}  // namespace zsurj
