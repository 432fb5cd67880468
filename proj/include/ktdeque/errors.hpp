#pragma once

#include <stdexcept>
#include <string>

namespace ktdeque {

// A caller broke a documented precondition (popping a zero-bound buffer,
// asking for the color of a size that has none, ...).
class precondition_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when an internal invariant that the structure guarantees turns out
// to be false. Reaching one of these is a bug in this library.
class internal_invariant_failure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

[[noreturn]] inline void invariant_failed(const std::string& what) {
  throw internal_invariant_failure(what);
}

}  // namespace ktdeque
