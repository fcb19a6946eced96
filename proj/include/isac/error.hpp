// SPDX-License-Identifier: Apache-2.0

#ifndef isac_error_H
#define isac_error_H

#include <stdexcept>
#include <string>

namespace isac
{
    // Invalid or incomplete run configuration. The message names the offending key.
    class ConfigError : public std::invalid_argument
    {
    public:
        explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
    };

    // A direction or distance collapsed to zero where a finite one is required.
    class DegenerateGeometry : public std::domain_error
    {
    public:
        explicit DegenerateGeometry(const std::string &what) : std::domain_error(what) {}
    };

    // Reading or writing a file failed.
    class IoError : public std::runtime_error
    {
    public:
        explicit IoError(const std::string &what) : std::runtime_error(what) {}
    };
}

#endif
