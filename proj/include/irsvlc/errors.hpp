// SPDX-License-Identifier: Apache-2.0
/**
 * @file errors.hpp
 * @brief Exception types shared by all irsvlc modules
 */
#pragma once

#include <stdexcept>
#include <string>

namespace irsvlc {

/// An operation was called outside its documented domain.
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry for which the requested quantity is undefined (e.g. antiparallel
/// incidence and reflection directions).
class DegenerateGeometryError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Invalid experiment description. Carries the offending field and, when
/// known, the 1-based line of the config file.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, std::string const& message, int line = 0)
        : std::runtime_error(format(field, message, line))
        , field_(std::move(field))
        , line_(line)
    {
    }

    std::string const& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

  private:
    static std::string
    format(std::string const& field, std::string const& message, int line)
    {
        std::string out;
        if (line > 0) {
            out += "line " + std::to_string(line) + ": ";
        }
        if (!field.empty()) {
            out += field + ": ";
        }
        return out + message;
    }

    std::string field_;
    int line_ = 0;
};

/// An output file or directory could not be written.
class OutputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace irsvlc
