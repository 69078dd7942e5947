#pragma once

#include <stdexcept>

namespace grfaug {

/// File could not be read, written or decoded.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grfaug
