#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ktdeque/deque.hpp"
#include "ktdeque/errors.hpp"

namespace ktdeque {

// A deque together with a claimed lower bound on its length. The count is
// tracked exactly here, so the bound always equals the length, but callers
// only rely on the lower bound.
template <class T>
class SBuffer {
 public:
  SBuffer() = default;

  static SBuffer empty() { return SBuffer(); }

  std::size_t bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return inner_.size(); }
  const Deque<T>& inner() const noexcept { return inner_; }

  SBuffer push(T x) const { return SBuffer(inner_.push(std::move(x)), bound_ + 1); }
  SBuffer inject(T x) const { return SBuffer(inner_.inject(std::move(x)), bound_ + 1); }

  // Throws precondition_violation when the bound is 0.
  std::pair<T, SBuffer> pop() const {
    if (bound_ == 0) throw precondition_violation("SBuffer::pop: bound is 0");
    auto r = inner_.pop();
    if (!r) invariant_failed("SBuffer::pop: empty despite a positive bound");
    return {std::move(r->first), SBuffer(std::move(r->second), bound_ - 1)};
  }

  std::pair<SBuffer, T> eject() const {
    if (bound_ == 0) throw precondition_violation("SBuffer::eject: bound is 0");
    auto r = inner_.eject();
    if (!r) invariant_failed("SBuffer::eject: empty despite a positive bound");
    return {SBuffer(std::move(r->first), bound_ - 1), std::move(r->second)};
  }

  // Pushes left to right, so the last element of xs ends up in front.
  SBuffer push_several(const std::vector<T>& xs) const {
    Deque<T> d = inner_;
    for (const T& x : xs) d = d.push(x);
    return SBuffer(std::move(d), bound_ + xs.size());
  }

  template <class F>
  void for_each(F&& f) const {
    inner_.for_each(std::forward<F>(f));
  }

  std::vector<T> to_vector() const { return inner_.to_vector(); }

  std::vector<std::string> validate() const {
    auto out = inner_.validate();
    if (bound_ > inner_.size())
      out.push_back("bound " + std::to_string(bound_) + " exceeds length " + std::to_string(inner_.size()));
    return out;
  }

 private:
  SBuffer(Deque<T> d, std::size_t bound) : inner_(std::move(d)), bound_(bound) {}

  Deque<T> inner_;
  std::size_t bound_ = 0;
};

}  // namespace ktdeque
