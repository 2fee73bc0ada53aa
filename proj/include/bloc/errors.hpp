#pragma once

#include <stdexcept>
#include <string>

namespace bloc {

// Bad configuration (CLI exit 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data (CLI exit 3).
struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bloc
