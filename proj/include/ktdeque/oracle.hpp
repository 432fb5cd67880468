#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace ktdeque {

// Reference sequence: every operation copies. Slow, obviously correct, and
// persistent because nothing is ever mutated after construction.
template <class V>
class OracleSeq {
 public:
  OracleSeq() : items_(std::make_shared<const std::vector<V>>()) {}
  explicit OracleSeq(std::vector<V> xs) : items_(std::make_shared<const std::vector<V>>(std::move(xs))) {}

  std::size_t size() const noexcept { return items_->size(); }
  bool is_empty() const noexcept { return items_->empty(); }
  const std::vector<V>& items() const noexcept { return *items_; }

  OracleSeq push(V x) const {
    std::vector<V> v;
    v.reserve(size() + 1);
    v.push_back(std::move(x));
    v.insert(v.end(), items_->begin(), items_->end());
    return OracleSeq(std::move(v));
  }

  OracleSeq inject(V x) const {
    std::vector<V> v = *items_;
    v.push_back(std::move(x));
    return OracleSeq(std::move(v));
  }

  std::optional<std::pair<V, OracleSeq>> pop() const {
    if (is_empty()) return std::nullopt;
    return std::make_pair(items_->front(), OracleSeq(std::vector<V>(items_->begin() + 1, items_->end())));
  }

  std::optional<std::pair<OracleSeq, V>> eject() const {
    if (is_empty()) return std::nullopt;
    return std::make_pair(OracleSeq(std::vector<V>(items_->begin(), items_->end() - 1)), items_->back());
  }

  static OracleSeq concat(const OracleSeq& a, const OracleSeq& b) {
    std::vector<V> v = *a.items_;
    v.insert(v.end(), b.items_->begin(), b.items_->end());
    return OracleSeq(std::move(v));
  }

 private:
  std::shared_ptr<const std::vector<V>> items_;
};

}  // namespace ktdeque
