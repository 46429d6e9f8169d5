#pragma once

#include <stdexcept>

namespace hdrgm {

/// Bad input data or configuration: unreadable or malformed files, invalid
/// options, images the pipeline cannot process. The CLI maps it to exit 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdrgm
