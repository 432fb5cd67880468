#pragma once

#include <cstdint>

namespace ktdeque {

// Counts structural constructions (heap nodes: packets, chain links, bodies,
// paired elements, stored triples, digits) performed by the current thread.
// Every operation in this library allocates through note_construction(), so
// the delta across one call is the work it did.
namespace work {

inline thread_local std::uint64_t constructions = 0;

inline void note_construction() noexcept { ++constructions; }

inline std::uint64_t current() noexcept { return constructions; }

// Measures the constructions performed between creation and read().
class Scope {
 public:
  Scope() noexcept : start_(constructions) {}
  std::uint64_t read() const noexcept { return constructions - start_; }

 private:
  std::uint64_t start_;
};

}  // namespace work
}  // namespace ktdeque
