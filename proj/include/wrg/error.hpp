#pragma once

#include <stdexcept>
#include <string>

namespace wrg {

/// Malformed configuration: rule files, option combinations.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or missing input data: manifests, documents, report files.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wrg
