#pragma once

#include <stdexcept>
#include <string>

namespace groupwalk {

// Thrown when an enumeration would exceed its configured size cap.
class ResourceCapError : public std::runtime_error {
 public:
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace groupwalk
