#pragma once

#include <stdexcept>
#include <string>

namespace hexmark {

// Invalid argument or malformed input. CLI maps this family to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Work refused because it exceeds a configured cap. CLI maps this to exit code 3.
class ResourceCapError : public std::runtime_error {
public:
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hexmark
