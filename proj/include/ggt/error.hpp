#pragma once

#include <stdexcept>
#include <string>

namespace ggt {

/// Malformed input, violated precondition, or a resource cap that was hit.
/// The CLI maps this to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug in the toolkit
/// (or a corrupted in-memory object), never a property of the data.
/// The CLI maps this to exit status 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ggt
