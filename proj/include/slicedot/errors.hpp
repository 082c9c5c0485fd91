#pragma once

#include <stdexcept>
#include <string>

namespace slicedot {

// Raised when a computation produces a non-finite or otherwise unusable
// result (as opposed to std::invalid_argument for bad inputs).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slicedot
