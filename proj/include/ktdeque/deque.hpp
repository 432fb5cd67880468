#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ktdeque/colors.hpp"
#include "ktdeque/errors.hpp"
#include "ktdeque/work_counter.hpp"

namespace ktdeque {

// Persistent real-time deque with worst-case constant-time push, pop, inject
// and eject. Elements of the packet at depth l are perfectly balanced pair
// trees holding 2^l values; the depth is carried as a tag on each pair node.
template <class T>
class Deque {
 public:
  struct PairNode;
  using PairPtr = std::shared_ptr<const PairNode>;
  // Index 0 is a pair of two elements one level down, index 1 a value.
  using Elem = std::variant<PairPtr, T>;

  struct PairNode {
    std::uint32_t level;
    Elem first;
    Elem second;
  };

  // Zero to five elements plus the color assigned to the buffer. The slot
  // array is inline so buffers never allocate.
  struct Buffer {
    std::array<Elem, 5> slot{};
    std::uint8_t size = 0;
    Hue3Color color;
  };

  struct PacketNode;
  // nullptr is the hole.
  using PacketPtr = std::shared_ptr<const PacketNode>;
  struct PacketNode {
    Buffer prefix;
    PacketPtr child;
    Buffer suffix;
  };

  struct ChainNode;
  using ChainPtr = std::shared_ptr<const ChainNode>;
  // Either Ending(buffer) or Chain(reg, packet, rest).
  struct ChainNode {
    bool ending = true;
    Buffer buffer;
    Regularity3 reg = Regularity3::G;
    PacketPtr packet;
    ChainPtr rest;
  };

  Deque() : chain_(ending(Buffer{{}, 0, Hue3::red})), length_(0) {}

  static Deque empty() { return Deque(); }

  std::size_t size() const noexcept { return length_; }
  bool is_empty() const noexcept { return length_ == 0; }
  const ChainPtr& chain() const noexcept { return chain_; }

  // Wraps an arbitrary chain without checking it. Meant for tests that need
  // hand-built (possibly invalid) states for the validator.
  static Deque from_chain_unchecked(ChainPtr c, std::size_t length) { return Deque(std::move(c), length); }

  Deque push(T x) const { return Deque(push_chain(Elem(std::in_place_index<1>, std::move(x)), chain_), length_ + 1); }
  Deque inject(T x) const { return Deque(inject_chain(chain_, Elem(std::in_place_index<1>, std::move(x))), length_ + 1); }

  std::optional<std::pair<T, Deque>> pop() const {
    if (length_ == 0) return std::nullopt;
    auto [x, c] = pop_chain(chain_);
    return std::make_pair(std::get<1>(std::move(x)), Deque(std::move(c), length_ - 1));
  }

  std::optional<std::pair<Deque, T>> eject() const {
    if (length_ == 0) return std::nullopt;
    auto [c, x] = eject_chain(chain_);
    return std::make_pair(Deque(std::move(c), length_ - 1), std::get<1>(std::move(x)));
  }

  // Visits values front to back.
  template <class F>
  void for_each(F&& f) const {
    std::vector<const Buffer*> prefixes, suffixes;
    const Buffer* last = nullptr;
    for (const ChainNode* c = chain_.get(); c; c = c->rest.get()) {
      if (c->ending) {
        last = &c->buffer;
        break;
      }
      for (const PacketNode* p = c->packet.get(); p; p = p->child.get()) {
        prefixes.push_back(&p->prefix);
        suffixes.push_back(&p->suffix);
      }
    }
    auto visit_buffer = [&](const Buffer& b) {
      for (std::size_t i = 0; i < b.size; ++i) visit_elem(b.slot[i], f);
    };
    for (const Buffer* b : prefixes) visit_buffer(*b);
    if (last) visit_buffer(*last);
    for (auto it = suffixes.rbegin(); it != suffixes.rend(); ++it) visit_buffer(**it);
  }

  std::vector<T> to_vector() const {
    std::vector<T> out;
    out.reserve(length_);
    for_each([&](const T& x) { out.push_back(x); });
    return out;
  }

  // ---- building blocks, public so tests can drive them directly ----

  static std::uint32_t level_of(const Elem& e) { return e.index() == 1 ? 0 : std::get<0>(e)->level; }

  static Elem make_pair(Elem a, Elem b) {
    std::uint32_t la = level_of(a);
    if (la != level_of(b)) invariant_failed("Deque: pairing elements of different levels");
    work::note_construction();
    return Elem(std::in_place_index<0>,
                std::make_shared<const PairNode>(PairNode{la + 1, std::move(a), std::move(b)}));
  }

  static const PairNode& unpair(const Elem& e) {
    if (e.index() != 0 || !std::get<0>(e)) invariant_failed("Deque: expected a pair element");
    return *std::get<0>(e);
  }

  // Best color a buffer of this size may carry: 0 and 5 red, 1 and 4 yellow,
  // 2 and 3 green.
  static Hue3Color natural_color(std::size_t size) {
    switch (size) {
      case 2:
      case 3: return Hue3::green;
      case 1:
      case 4: return Hue3::yellow;
      default: return Hue3::red;
    }
  }

  static bool color_allowed(std::size_t size, Hue3Color c) {
    return size <= 5 && !c.uncolored() && c.rank() <= natural_color(size).rank();
  }

  // Pushes onto a green buffer and returns the yellow result.
  static Buffer green_push_buffer(Elem x, const Buffer& b) {
    if (!b.color.green() || b.size < 2 || b.size > 3) throw std::domain_error("green_push_buffer: buffer is not green");
    return recolor(push_front(b, std::move(x)), Hue3::yellow);
  }

  // Turns a red chain into a green one holding the same sequence. Throws
  // std::domain_error when the chain is not red.
  static ChainPtr green_of_red(const ChainPtr& c) {
    if (!c || c->ending || !c->packet || !c->packet->prefix.color.red())
      throw std::domain_error("green_of_red: chain is not red");
    const PacketNode& pk = *c->packet;
    Buffer p = pk.prefix, s = pk.suffix;
    if (!pk.child) {
      const ChainNode& r = *c->rest;
      if (r.ending) return rebuild_small(p, r.buffer, s);
      if (!r.packet->prefix.color.green()) invariant_failed("green_of_red: red packet followed by a non-green chain");
      Buffer p2 = r.packet->prefix, s2 = r.packet->suffix;
      fix_prefix(p, p2);
      fix_suffix(s, s2);
      PacketPtr inner = packet(recolor(p2, Hue3::yellow), r.packet->child, recolor(s2, Hue3::yellow));
      return link(Regularity3::G, packet(recolor(p, Hue3::green), std::move(inner), recolor(s, Hue3::green)), r.rest);
    }
    const PacketNode& ch = *pk.child;
    Buffer p2 = ch.prefix, s2 = ch.suffix;
    fix_prefix(p, p2);
    fix_suffix(s, s2);
    ChainPtr below = link(Regularity3::R, packet(recolor(p2, Hue3::red), ch.child, recolor(s2, Hue3::red)), c->rest);
    return link(Regularity3::G, packet(recolor(p, Hue3::green), nullptr, recolor(s, Hue3::green)), std::move(below));
  }

  static ChainPtr ensure_green(const ChainPtr& c) {
    Hue3Color col = chain_color(c);
    if (col.green()) return c;
    if (col.red()) return green_of_red(c);
    throw std::domain_error("ensure_green: chain is yellow");
  }

  static Hue3Color chain_color(const ChainPtr& c) { return c->ending ? Hue3::green : c->packet->prefix.color; }

  // Empty vector means valid.
  std::vector<std::string> validate() const {
    std::vector<std::string> out;
    std::size_t counted = 0;
    std::uint32_t level = 0;
    std::size_t link_no = 0;
    auto where = [&](const char* what) { return "link " + std::to_string(link_no) + " level " + std::to_string(level) + ": " + what; };
    auto check_buffer = [&](const Buffer& b, const char* what) {
      if (b.size > 5) {
        out.push_back(where(what) + std::string(" has more than 5 elements"));
        return;
      }
      if (!color_allowed(b.size, b.color))
        out.push_back(where(what) + std::string(" size ") + std::to_string(b.size) + " cannot be " + std::string(b.color.name()));
      for (std::size_t i = 0; i < b.size; ++i) {
        const Elem& e = b.slot[i];
        if (e.index() == 0 && !std::get<0>(e)) {
          out.push_back(where(what) + std::string(" holds a null pair"));
          continue;
        }
        if (level_of(e) != level) out.push_back(where(what) + std::string(" holds an element of the wrong level"));
        if (level < 64) counted += std::size_t(1) << level;
      }
    };
    if (!chain_) {
      out.push_back("null chain");
      return out;
    }
    if (chain_color(chain_).red()) out.push_back("top chain is red");
    for (const ChainNode* c = chain_.get(); c; c = c->rest.get(), ++link_no) {
      if (c->ending) {
        check_buffer(c->buffer, "ending buffer");
        if (c->rest) out.push_back(where("ending has a successor"));
        break;
      }
      if (!c->packet) {
        out.push_back(where("chain link without a packet"));
        break;
      }
      if (!c->rest) {
        out.push_back(where("chain link without a rest"));
        break;
      }
      bool top = true;
      for (const PacketNode* p = c->packet.get(); p; p = p->child.get(), ++level, top = false) {
        check_buffer(p->prefix, "prefix");
        check_buffer(p->suffix, "suffix");
        if (p->prefix.color != p->suffix.color) out.push_back(where("prefix and suffix colors differ"));
        if (!top && !p->prefix.color.yellow()) out.push_back(where("child packet is not yellow"));
      }
      Hue3Color pc = c->packet->prefix.color;
      if (pc != packet_color(c->reg))
        out.push_back(where("witness does not match packet color ") + std::string(pc.name()));
      if (!admits_next(c->reg, chain_color(c->rest)))
        out.push_back(where("witness forbids next chain color ") + std::string(chain_color(c->rest).name()));
    }
    if (counted != length_)
      out.push_back("cached length " + std::to_string(length_) + " but structure holds " + std::to_string(counted));
    return out;
  }

  // Walks every pair tree and checks that both halves sit one level down.
  // Linear in the size of the deque.
  std::vector<std::string> validate_deep() const {
    auto out = validate();
    std::size_t bad = 0;
    auto check = [&](auto&& self, const Elem& e) -> void {
      if (e.index() == 1) return;
      const PairNode& p = *std::get<0>(e);
      if (level_of(p.first) + 1 != p.level || level_of(p.second) + 1 != p.level) ++bad;
      self(self, p.first);
      self(self, p.second);
    };
    auto scan = [&](const Buffer& b) {
      for (std::size_t i = 0; i < b.size && i < 5; ++i) check(check, b.slot[i]);
    };
    for (const ChainNode* c = chain_.get(); c; c = c->rest.get()) {
      if (c->ending) {
        scan(c->buffer);
        break;
      }
      for (const PacketNode* p = c->packet.get(); p; p = p->child.get()) {
        scan(p->prefix);
        scan(p->suffix);
      }
    }
    if (bad) out.push_back(std::to_string(bad) + " unbalanced pair nodes");
    return out;
  }

 private:
  Deque(ChainPtr c, std::size_t length) : chain_(std::move(c)), length_(length) {}

  template <class F>
  static void visit_elem(const Elem& e, F& f) {
    if (e.index() == 1) {
      f(std::get<1>(e));
      return;
    }
    const PairNode& p = *std::get<0>(e);
    visit_elem(p.first, f);
    visit_elem(p.second, f);
  }

  static Buffer recolor(Buffer b, Hue3Color c) {
    b.color = c;
    return b;
  }

  static Buffer push_front(Buffer b, Elem x) {
    if (b.size >= 5) invariant_failed("Deque: push onto a full buffer");
    for (std::size_t i = b.size; i > 0; --i) b.slot[i] = std::move(b.slot[i - 1]);
    b.slot[0] = std::move(x);
    ++b.size;
    return b;
  }

  static Buffer push_back(Buffer b, Elem x) {
    if (b.size >= 5) invariant_failed("Deque: inject into a full buffer");
    b.slot[b.size++] = std::move(x);
    return b;
  }

  static Elem take_front(Buffer& b) {
    if (b.size == 0) invariant_failed("Deque: pop from an empty buffer");
    Elem x = std::move(b.slot[0]);
    for (std::size_t i = 1; i < b.size; ++i) b.slot[i - 1] = std::move(b.slot[i]);
    b.slot[--b.size] = Elem{};
    return x;
  }

  static Elem take_back(Buffer& b) {
    if (b.size == 0) invariant_failed("Deque: eject from an empty buffer");
    Elem x = std::move(b.slot[--b.size]);
    b.slot[b.size] = Elem{};
    return x;
  }

  static Buffer natural(Buffer b) {
    b.color = natural_color(b.size);
    return b;
  }

  static ChainPtr ending(Buffer b) {
    work::note_construction();
    auto n = std::make_shared<ChainNode>();
    n->ending = true;
    n->buffer = std::move(b);
    return n;
  }

  static ChainPtr link(Regularity3 reg, PacketPtr pk, ChainPtr rest) {
    work::note_construction();
    auto n = std::make_shared<ChainNode>();
    n->ending = false;
    n->reg = reg;
    n->packet = std::move(pk);
    n->rest = std::move(rest);
    return n;
  }

  static PacketPtr packet(Buffer p, PacketPtr child, Buffer s) {
    work::note_construction();
    return std::make_shared<const PacketNode>(PacketNode{std::move(p), std::move(child), std::move(s)});
  }

  // Brings a prefix back to 2 or 3 elements by trading pairs with the prefix
  // one level down.
  static void fix_prefix(Buffer& p, Buffer& p2) {
    if (p.size >= 4) {
      Elem b = take_back(p);
      Elem a = take_back(p);
      p2 = push_front(std::move(p2), make_pair(std::move(a), std::move(b)));
    } else if (p.size <= 1) {
      Elem e = take_front(p2);
      const PairNode& ab = unpair(e);
      p = push_back(push_back(std::move(p), ab.first), ab.second);
    }
  }

  static void fix_suffix(Buffer& s, Buffer& s2) {
    if (s.size >= 4) {
      Elem a = take_front(s);
      Elem b = take_front(s);
      s2 = push_back(std::move(s2), make_pair(std::move(a), std::move(b)));
    } else if (s.size <= 1) {
      Elem e = take_back(s2);
      const PairNode& ab = unpair(e);
      s = push_front(push_front(std::move(s), ab.second), ab.first);
    }
  }

  // Red packet with a hole directly above an Ending: at most 20 elements in
  // total, rebuilt from scratch as a green chain.
  static ChainPtr rebuild_small(const Buffer& p, const Buffer& mid, const Buffer& s) {
    std::array<Elem, 20> all{};
    std::size_t n = 0;
    for (std::size_t i = 0; i < p.size; ++i) all[n++] = p.slot[i];
    for (std::size_t i = 0; i < mid.size; ++i) {
      const PairNode& ab = unpair(mid.slot[i]);
      all[n++] = ab.first;
      all[n++] = ab.second;
    }
    for (std::size_t i = 0; i < s.size; ++i) all[n++] = s.slot[i];

    auto slice = [&](std::size_t from, std::size_t count) {
      Buffer b;
      for (std::size_t i = 0; i < count; ++i) b.slot[i] = all[from + i];
      b.size = std::uint8_t(count);
      return natural(std::move(b));
    };
    if (n <= 5) return ending(slice(0, n));

    std::size_t ns = (n % 2 == 0) ? 3 : 2;
    std::size_t pairs = (n - 3 - ns) / 2;
    Buffer np = slice(0, 3), ns_buf = slice(n - ns, ns);
    std::array<Elem, 7> paired{};
    for (std::size_t i = 0; i < pairs; ++i) paired[i] = make_pair(all[3 + 2 * i], all[4 + 2 * i]);
    auto from_pairs = [&](std::size_t from, std::size_t count) {
      Buffer b;
      for (std::size_t i = 0; i < count; ++i) b.slot[i] = paired[from + i];
      b.size = std::uint8_t(count);
      return b;
    };
    if (pairs <= 5) return link(Regularity3::G, packet(np, nullptr, ns_buf), ending(natural(from_pairs(0, pairs))));
    // Six or seven pairs: a yellow child packet of 3 and 3 or 4, over an empty ending.
    PacketPtr inner = packet(recolor(from_pairs(0, 3), Hue3::yellow), nullptr,
                             recolor(from_pairs(3, pairs - 3), Hue3::yellow));
    return link(Regularity3::G, packet(np, std::move(inner), ns_buf), ending(Buffer{{}, 0, Hue3::red}));
  }

  static ChainPtr push_chain(Elem x, const ChainPtr& c) {
    if (c->ending) {
      const Buffer& b = c->buffer;
      if (b.size < 5) return ending(natural(push_front(b, std::move(x))));
      Buffer p{{std::move(x), b.slot[0], b.slot[1]}, 3, Hue3::green};
      Buffer s{{b.slot[2], b.slot[3], b.slot[4]}, 3, Hue3::green};
      return link(Regularity3::G, packet(std::move(p), nullptr, std::move(s)), ending(Buffer{{}, 0, Hue3::red}));
    }
    const PacketNode& pk = *c->packet;
    if (c->reg == Regularity3::G)
      return link(Regularity3::Y, packet(green_push_buffer(std::move(x), pk.prefix), pk.child, recolor(pk.suffix, Hue3::yellow)),
                  ensure_green(c->rest));
    if (c->reg == Regularity3::Y)
      return green_of_red(link(Regularity3::R, packet(recolor(push_front(pk.prefix, std::move(x)), Hue3::red), pk.child,
                                                      recolor(pk.suffix, Hue3::red)),
                               c->rest));
    invariant_failed("Deque::push: top chain is red");
  }

  static ChainPtr inject_chain(const ChainPtr& c, Elem x) {
    if (c->ending) {
      const Buffer& b = c->buffer;
      if (b.size < 5) return ending(natural(push_back(b, std::move(x))));
      Buffer p{{b.slot[0], b.slot[1], b.slot[2]}, 3, Hue3::green};
      Buffer s{{b.slot[3], b.slot[4], std::move(x)}, 3, Hue3::green};
      return link(Regularity3::G, packet(std::move(p), nullptr, std::move(s)), ending(Buffer{{}, 0, Hue3::red}));
    }
    const PacketNode& pk = *c->packet;
    if (c->reg == Regularity3::G) {
      if (pk.suffix.size < 2 || pk.suffix.size > 3) invariant_failed("Deque::inject: green suffix of bad size");
      return link(Regularity3::Y, packet(recolor(pk.prefix, Hue3::yellow), pk.child, recolor(push_back(pk.suffix, std::move(x)), Hue3::yellow)),
                  ensure_green(c->rest));
    }
    if (c->reg == Regularity3::Y)
      return green_of_red(link(Regularity3::R, packet(recolor(pk.prefix, Hue3::red), pk.child,
                                                      recolor(push_back(pk.suffix, std::move(x)), Hue3::red)),
                               c->rest));
    invariant_failed("Deque::inject: top chain is red");
  }

  static std::pair<Elem, ChainPtr> pop_chain(const ChainPtr& c) {
    if (c->ending) {
      Buffer b = c->buffer;
      Elem x = take_front(b);
      return {std::move(x), ending(natural(std::move(b)))};
    }
    const PacketNode& pk = *c->packet;
    Buffer p = pk.prefix;
    Elem x = take_front(p);
    if (c->reg == Regularity3::G)
      return {std::move(x), link(Regularity3::Y, packet(recolor(std::move(p), Hue3::yellow), pk.child, recolor(pk.suffix, Hue3::yellow)),
                                 ensure_green(c->rest))};
    if (c->reg == Regularity3::Y)
      return {std::move(x), green_of_red(link(Regularity3::R, packet(recolor(std::move(p), Hue3::red), pk.child, recolor(pk.suffix, Hue3::red)),
                                              c->rest))};
    invariant_failed("Deque::pop: top chain is red");
  }

  static std::pair<ChainPtr, Elem> eject_chain(const ChainPtr& c) {
    if (c->ending) {
      Buffer b = c->buffer;
      Elem x = take_back(b);
      return {ending(natural(std::move(b))), std::move(x)};
    }
    const PacketNode& pk = *c->packet;
    Buffer s = pk.suffix;
    Elem x = take_back(s);
    if (c->reg == Regularity3::G)
      return {link(Regularity3::Y, packet(recolor(pk.prefix, Hue3::yellow), pk.child, recolor(std::move(s), Hue3::yellow)),
                   ensure_green(c->rest)),
              std::move(x)};
    if (c->reg == Regularity3::Y)
      return {green_of_red(link(Regularity3::R, packet(recolor(pk.prefix, Hue3::red), pk.child, recolor(std::move(s), Hue3::red)),
                                c->rest)),
              std::move(x)};
    invariant_failed("Deque::eject: top chain is red");
  }

  ChainPtr chain_;
  std::size_t length_;
};

}  // namespace ktdeque
