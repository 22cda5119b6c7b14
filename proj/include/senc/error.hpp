#pragma once

#include <stdexcept>
#include <string>

namespace senc {

// Error raised for bad data or violated algorithm preconditions.
// The CLI maps it to exit code 2; usage errors are handled by the
// argument parser and exit with 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace senc
