#pragma once

#include <stdexcept>
#include <string>

namespace cge {

// Malformed input: bad probabilities, uncovered letters, schema errors.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// The optimality check was asked to certify a point that is not an
// (approximate) fixed point of the stepping map.
class NotAFixedPoint : public std::runtime_error {
public:
    explicit NotAFixedPoint(const std::string& what) : std::runtime_error(what) {}
};

// A brute-force oracle refused an instance because its free dimension
// exceeds the grid budget.
class DimensionRefusal : public std::runtime_error {
public:
    explicit DimensionRefusal(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cge
