#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "ktdeque/colors.hpp"
#include "ktdeque/errors.hpp"
#include "ktdeque/sized_buffer.hpp"
#include "ktdeque/work_counter.hpp"

namespace ktdeque {

enum class NodeKind : std::uint8_t { Only, Left, Right };

enum class ColoringVariant : std::uint8_t { EN, GN, YN, ON, RN };

// Witness relating a node's buffer sizes (as size - 5), arity and color.
struct NodeColoring {
  ColoringVariant variant;
  long prefix_delta;
  long suffix_delta;
  int arity;
  Hue4Color color;
};

inline std::string_view name(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::Only: return "only";
    case NodeKind::Left: return "left";
    case NodeKind::Right: return "right";
  }
  return "?";
}

inline std::string_view name(ColoringVariant v) noexcept {
  switch (v) {
    case ColoringVariant::EN: return "EN";
    case ColoringVariant::GN: return "GN";
    case ColoringVariant::YN: return "YN";
    case ColoringVariant::ON: return "ON";
    case ColoringVariant::RN: return "RN";
  }
  return "?";
}

// Smallest delta each coloring admits on a constrained buffer.
inline long min_delta(Hue4Color c) {
  if (c.green()) return 3;
  if (c.yellow()) return 2;
  if (c.orange()) return 1;
  return 0;
}

// Persistent catenable deque with worst-case constant-time push, pop,
// inject, eject and concat.
//
// Elements at depth 0 are values; deeper buffers hold stored triples. A node
// and its child chain can be viewed as a Triple; every operation rewrites
// at most a constant number of triples near the root and then repairs the
// root packets so that they are green again.
template <class V>
class Cadeque {
 public:
  struct Stored;
  using StoredPtr = std::shared_ptr<const Stored>;
  // Index 0 is a stored triple, index 1 a value (a ground element).
  using Elt = std::variant<StoredPtr, V>;
  using Buf = SBuffer<Elt>;

  struct ChainNode;
  // nullptr is the empty chain.
  using ChainPtr = std::shared_ptr<const ChainNode>;

  struct Node {
    NodeKind kind = NodeKind::Only;
    bool end = false;  // Only_end: kind only, arity 0, single buffer in `prefix`
    std::uint8_t arity = 0;
    Hue4Color color = Hue4::green;
    Buf prefix;  // Only, Only_end, Left
    Buf suffix;  // Only, Right
    Elt pa, pb;  // Left: rear pair. Right: front pair.
  };

  struct Stored {
    std::uint32_t level;
    bool big;
    Buf prefix;  // the single buffer of a small triple
    ChainPtr child;
    Buf suffix;
  };

  enum class BodyTag : std::uint8_t { SingleChild, PairOrange, PairYellow };
  struct BodyFrame;
  // nullptr is the hole.
  using BodyPtr = std::shared_ptr<const BodyFrame>;
  struct BodyFrame {
    BodyTag tag;
    Node node;
    ChainPtr other;  // PairOrange: left chain. PairYellow: right chain.
    BodyPtr cont;
  };

  // Single(reg, Packet(body, tail), child) or Pair(left, right).
  struct ChainNode {
    bool pair = false;
    Regularity4 reg = Regularity4::G;
    BodyPtr body;
    Node tail;
    ChainPtr child;
    ChainPtr left, right;
  };

  struct Triple {
    Node node;
    ChainPtr child;
  };

  // Validation results for stored triples already checked, keyed by address.
  // Only sound while every structure that was validated stays alive.
  struct ValidationCache {
    std::unordered_map<const Stored*, std::size_t> counts;
  };

  Cadeque() = default;
  static Cadeque empty() { return Cadeque(); }

  std::size_t size() const noexcept { return length_; }
  bool is_empty() const noexcept { return !chain_; }
  const ChainPtr& chain() const noexcept { return chain_; }

  static Cadeque from_chain_unchecked(ChainPtr c, std::size_t length) { return Cadeque(std::move(c), length); }

  Cadeque push(V x) const { return Cadeque(push_naive(ground(std::move(x)), chain_), length_ + 1); }
  Cadeque inject(V x) const { return Cadeque(inject_naive(chain_, ground(std::move(x))), length_ + 1); }

  std::optional<std::pair<V, Cadeque>> pop() const {
    if (!chain_) return std::nullopt;
    auto [x, c] = extract_front(chain_, true);
    return std::make_pair(std::get<1>(std::move(x)), Cadeque(std::move(c), length_ - 1));
  }

  std::optional<std::pair<Cadeque, V>> eject() const {
    if (!chain_) return std::nullopt;
    auto [c, x] = extract_back(chain_, true);
    return std::make_pair(Cadeque(std::move(c), length_ - 1), std::get<1>(std::move(x)));
  }

  static Cadeque concat(const Cadeque& a, const Cadeque& b) {
    return Cadeque(concat_chains(a.chain_, b.chain_, true), a.length_ + b.length_);
  }

  // Visits values front to back. Recursion depth grows with the nesting
  // depth of the structure, which is logarithmic in its size.
  template <class F>
  void for_each(F&& f) const {
    visit_chain(chain_, f);
  }

  std::vector<V> to_vector() const {
    std::vector<V> out;
    out.reserve(length_);
    for_each([&](const V& x) { out.push_back(x); });
    return out;
  }

  std::vector<std::string> validate(ValidationCache* cache = nullptr) const {
    ValidationCache local;
    Checker ck{cache ? *cache : local, {}};
    std::size_t n = ck.chain(chain_, 0, Expect::Only, -1, "top");
    if (!roots_green(chain_)) ck.fail("top", "root packet is not green");
    if (n != length_)
      ck.fail("top", "cached length " + std::to_string(length_) + " but structure holds " + std::to_string(n));
    return std::move(ck.out);
  }

  // ---- building blocks, public so tests can reach them ----

  static NodeColoring coloring_of(const Node& n) {
    long pd = n.kind == NodeKind::Right ? 0 : long(n.prefix.size()) - 5;
    long sd = n.kind == NodeKind::Left ? 0 : long(n.suffix.size()) - 5;
    if (n.end) sd = 0;
    ColoringVariant v = ColoringVariant::RN;
    if (n.arity == 0)
      v = ColoringVariant::EN;
    else if (n.color.green())
      v = ColoringVariant::GN;
    else if (n.color.yellow())
      v = ColoringVariant::YN;
    else if (n.color.orange())
      v = ColoringVariant::ON;
    return NodeColoring{v, pd, sd, n.arity, n.color};
  }

  static Hue4Color natural_color(const Node& n) {
    if (n.arity == 0) return Hue4::green;
    switch (n.kind) {
      case NodeKind::Only: return worst(size_to_color(n.prefix.size()), size_to_color(n.suffix.size()));
      case NodeKind::Left: return size_to_color(n.prefix.size());
      case NodeKind::Right: return size_to_color(n.suffix.size());
    }
    return Hue4::red;
  }

  static int arity_of(const ChainPtr& c) { return !c ? 0 : c->pair ? 2 : 1; }

  static const Node& head_node(const ChainNode& c) { return c.body ? c.body->node : c.tail; }

  // All root packets green; the empty chain counts as green.
  static bool roots_green(const ChainPtr& c) {
    if (!c) return true;
    if (c->pair) return c->left->tail.color.green() && c->right->tail.color.green();
    return c->tail.color.green();
  }

  static Triple triple_of_chain(const ChainPtr& c) {
    if (!c || c->pair) invariant_failed("triple_of_chain: expected a single chain");
    if (!c->body) return Triple{c->tail, c->child};
    const BodyFrame& f = *c->body;
    ChainPtr inner = single(c->reg, f.cont, c->tail, c->child);
    switch (f.tag) {
      case BodyTag::SingleChild: return Triple{f.node, std::move(inner)};
      case BodyTag::PairYellow: return Triple{f.node, pair_chain(std::move(inner), f.other)};
      case BodyTag::PairOrange: return Triple{f.node, pair_chain(f.other, std::move(inner))};
    }
    invariant_failed("triple_of_chain: bad body tag");
  }

  // Inverse of triple_of_chain. Yellow and orange nodes join the packet of
  // their preferred child (the left one for yellow, the right one for orange).
  static ChainPtr chain_of_triple(const Triple& t) {
    const Node& n = t.node;
    if (n.color.green()) return single(Regularity4::G, nullptr, n, t.child);
    if (n.color.red()) return single(Regularity4::R, nullptr, n, t.child);
    if (n.arity == 1) {
      const ChainNode& c = *t.child;
      return single(c.reg, frame(BodyTag::SingleChild, n, nullptr, c.body), c.tail, c.child);
    }
    if (n.arity != 2 || !t.child || !t.child->pair) invariant_failed("chain_of_triple: arity and child disagree");
    if (n.color.yellow()) {
      const ChainNode& l = *t.child->left;
      return single(l.reg, frame(BodyTag::PairYellow, n, t.child->right, l.body), l.tail, l.child);
    }
    const ChainNode& r = *t.child->right;
    return single(r.reg, frame(BodyTag::PairOrange, n, t.child->left, r.body), r.tail, r.child);
  }

  // Pushes without any repair. Colors never get worse, so regularity holds.
  static ChainPtr push_naive(Elt x, const ChainPtr& c) {
    if (!c) return only_end_chain(Buf().push(std::move(x)));
    if (c->pair) {
      Node h = head_node(*c->left);
      h.prefix = h.prefix.push(std::move(x));
      return pair_chain(replace_head(c->left, std::move(h)), c->right);
    }
    Node h = head_node(*c);
    h.prefix = h.prefix.push(std::move(x));
    return replace_head(c, std::move(h));
  }

  static ChainPtr inject_naive(const ChainPtr& c, Elt x) {
    if (!c) return only_end_chain(Buf().inject(std::move(x)));
    if (c->pair) {
      Node h = head_node(*c->right);
      h.suffix = h.suffix.inject(std::move(x));
      return pair_chain(c->left, replace_head(c->right, std::move(h)));
    }
    Node h = head_node(*c);
    if (h.end)
      h.prefix = h.prefix.inject(std::move(x));
    else
      h.suffix = h.suffix.inject(std::move(x));
    return replace_head(c, std::move(h));
  }

  // Makes a single chain's root packet green.
  static ChainPtr ensure_green(const ChainPtr& c) {
    if (!c || c->pair) invariant_failed("ensure_green: expected a single chain");
    if (c->tail.color.green()) return c;
    Triple t = green_of_red(Triple{c->tail, c->child});
    return single(Regularity4::G, c->body, std::move(t.node), std::move(t.child));
  }

  // Turns a triple whose node has any color into a single chain whose root
  // packet is green.
  static ChainPtr regularize_top(Triple t) {
    const Hue4Color c = t.node.color;
    if (c.green()) return chain_of_triple(t);
    if (t.node.arity == 1) {
      t.child = ensure_green(t.child);
    } else if (t.node.arity == 2) {
      ChainPtr l = ensure_green(t.child->left);
      ChainPtr r = c.yellow() ? t.child->right : ensure_green(t.child->right);
      if (l != t.child->left || r != t.child->right) t.child = pair_chain(std::move(l), std::move(r));
    }
    if (c.red()) t = green_of_red(std::move(t));
    return chain_of_triple(t);
  }

  // Requires a red node of positive arity whose child chain has green
  // roots. Returns a green node of the same kind with a child chain that
  // satisfies the semi-regularity constraints.
  static Triple green_of_red(Triple t) {
    Node& n = t.node;
    if (!n.color.red()) throw std::domain_error("green_of_red: node is not red");
    if (n.arity == 0 || !t.child) invariant_failed("green_of_red: red node without children");
    switch (n.kind) {
      case NodeKind::Only: {
        const bool needP = n.prefix.size() < 8, needS = n.suffix.size() < 8;
        if (!needP && !needS) {
          n.color = Hue4::green;
          return t;
        }
        if (needP && needS && is_singleton(t.child)) return green_of_red_singleton(std::move(n), t.child);
        ChainPtr mid = t.child, x, y;
        if (needP) {
          auto [st, rest] = extract_front(mid, false);
          mid = std::move(rest);
          x = fix_prefix(n.prefix, st);
        }
        if (needS) {
          auto [rest, st] = extract_back(mid, false);
          mid = std::move(rest);
          y = fix_suffix(st, n.suffix);
        }
        return finish_only(std::move(n), concat_chains(concat_chains(x, mid, false), y, false), needP);
      }
      case NodeKind::Left: {
        if (n.prefix.size() < 8) {
          auto [st, rest] = extract_front(t.child, false);
          ChainPtr x = fix_prefix(n.prefix, st);
          t.child = concat_chains(x, rest, false);
        }
        n.arity = std::uint8_t(arity_of(t.child));
        n.color = Hue4::green;
        return t;
      }
      case NodeKind::Right: {
        if (n.suffix.size() < 8) {
          auto [rest, st] = extract_back(t.child, false);
          ChainPtr y = fix_suffix(st, n.suffix);
          t.child = concat_chains(rest, y, false);
        }
        n.arity = std::uint8_t(arity_of(t.child));
        n.color = Hue4::green;
        return t;
      }
    }
    invariant_failed("green_of_red: bad node kind");
  }

 private:
  Cadeque(ChainPtr c, std::size_t length) : chain_(std::move(c)), length_(length) {}

  static Elt ground(V x) { return Elt(std::in_place_index<1>, std::move(x)); }

  static std::uint32_t level_of(const Elt& e) { return e.index() == 1 ? 0 : std::get<0>(e)->level; }

  static const Stored& stored_of(const Elt& e) {
    if (e.index() != 0 || !std::get<0>(e)) invariant_failed("Cadeque: expected a stored triple");
    return *std::get<0>(e);
  }

  static ChainPtr single(Regularity4 reg, BodyPtr body, Node tail, ChainPtr child) {
    work::note_construction();
    auto c = std::make_shared<ChainNode>();
    c->reg = reg;
    c->body = std::move(body);
    c->tail = std::move(tail);
    c->child = std::move(child);
    return c;
  }

  static ChainPtr pair_chain(ChainPtr l, ChainPtr r) {
    work::note_construction();
    auto c = std::make_shared<ChainNode>();
    c->pair = true;
    c->left = std::move(l);
    c->right = std::move(r);
    return c;
  }

  static BodyPtr frame(BodyTag tag, Node n, ChainPtr other, BodyPtr cont) {
    work::note_construction();
    return std::make_shared<const BodyFrame>(BodyFrame{tag, std::move(n), std::move(other), std::move(cont)});
  }

  static Elt make_small(Buf b, std::uint32_t level) {
    work::note_construction();
    return Elt(std::in_place_index<0>, std::make_shared<const Stored>(Stored{level, false, std::move(b), nullptr, Buf()}));
  }

  static Elt make_big(Buf p, ChainPtr child, Buf s, std::uint32_t level) {
    work::note_construction();
    return Elt(std::in_place_index<0>,
               std::make_shared<const Stored>(Stored{level, true, std::move(p), std::move(child), std::move(s)}));
  }

  static Node only_end_node(Buf b) {
    Node n;
    n.kind = NodeKind::Only;
    n.end = true;
    n.arity = 0;
    n.color = Hue4::green;
    n.prefix = std::move(b);
    return n;
  }

  static ChainPtr only_end_chain(Buf b) { return single(Regularity4::G, nullptr, only_end_node(std::move(b)), nullptr); }

  static ChainPtr replace_head(const ChainPtr& c, Node n) {
    if (!c->body) return single(c->reg, nullptr, std::move(n), c->child);
    const BodyFrame& f = *c->body;
    return single(c->reg, frame(f.tag, std::move(n), f.other, f.cont), c->tail, c->child);
  }

  static bool is_singleton(const ChainPtr& c) {
    return c && !c->pair && !c->body && c->tail.end && c->tail.prefix.size() == 1;
  }

  static bool is_small(const ChainPtr& c) {
    return c && !c->pair && !c->body && c->tail.end && c->tail.prefix.size() <= 6;
  }

  // Moves n elements from the front of src to the back of dst.
  static void front_to_back(Buf& src, Buf& dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      auto [x, rest] = src.pop();
      src = std::move(rest);
      dst = dst.inject(std::move(x));
    }
  }

  // Moves n elements from the back of src to the front of dst.
  static void back_to_front(Buf& src, Buf& dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      auto [rest, x] = src.eject();
      src = std::move(rest);
      dst = dst.push(std::move(x));
    }
  }

  // Callers only pass buffers whose size is bounded by a small constant.
  static void append_all(Buf& dst, Buf src) { front_to_back(src, dst, src.size()); }
  static void prepend_all(Buf src, Buf& dst) { back_to_front(src, dst, src.size()); }

  // Refills a prefix from the stored triple st. Returns the chain that holds
  // whatever part of st was not absorbed.
  static ChainPtr fix_prefix(Buf& prefix, const Elt& st) {
    const Stored& s = stored_of(st);
    Buf p = s.prefix;
    if (p.size() >= 6) {
      front_to_back(p, prefix, 3);
      return only_end_chain(Buf().push(s.big ? make_big(std::move(p), s.child, s.suffix, s.level)
                                              : make_small(std::move(p), s.level)));
    }
    append_all(prefix, std::move(p));
    if (!s.big) return nullptr;
    return inject_naive(s.child, make_small(s.suffix, s.level));
  }

  static ChainPtr fix_suffix(const Elt& st, Buf& suffix) {
    const Stored& s = stored_of(st);
    Buf b = s.big ? s.suffix : s.prefix;
    if (b.size() >= 6) {
      back_to_front(b, suffix, 3);
      return only_end_chain(Buf().push(s.big ? make_big(s.prefix, s.child, std::move(b), s.level)
                                              : make_small(std::move(b), s.level)));
    }
    prepend_all(std::move(b), suffix);
    if (!s.big) return nullptr;
    return push_naive(make_small(s.prefix, s.level), s.child);
  }

  // Completes an only node after its buffers were refilled. With no child
  // left, both buffers merge; the side named by prefix_bounded holds at most
  // a dozen elements and is the one that moves.
  static Triple finish_only(Node n, ChainPtr child, bool prefix_bounded) {
    if (child) {
      n.arity = std::uint8_t(arity_of(child));
      n.color = Hue4::green;
      return Triple{std::move(n), std::move(child)};
    }
    Buf b;
    if (prefix_bounded) {
      b = n.suffix;
      prepend_all(n.prefix, b);
    } else {
      b = n.prefix;
      append_all(b, n.suffix);
    }
    return Triple{only_end_node(std::move(b)), nullptr};
  }

  // Red only node that needs both buffers refilled while its child holds a
  // single stored triple.
  static Triple green_of_red_singleton(Node n, const ChainPtr& c) {
    auto [st, empty] = c->tail.prefix.pop();
    const Stored& s = stored_of(st);
    if (!s.big) {
      Buf b = s.prefix;
      if (b.size() >= 9) {
        front_to_back(b, n.prefix, 3);
        back_to_front(b, n.suffix, 3);
        return finish_only(std::move(n), only_end_chain(Buf().push(make_small(std::move(b), s.level))), true);
      }
      append_all(n.prefix, std::move(b));
      return finish_only(std::move(n), nullptr, false);
    }
    Buf p = s.prefix, sf = s.suffix;
    const bool keepP = p.size() >= 6, keepS = sf.size() >= 6;
    if (keepP)
      front_to_back(p, n.prefix, 3);
    else
      append_all(n.prefix, p);
    if (keepS)
      back_to_front(sf, n.suffix, 3);
    else
      prepend_all(sf, n.suffix);
    ChainPtr child;
    if (keepP && keepS)
      child = only_end_chain(Buf().push(make_big(std::move(p), s.child, std::move(sf), s.level)));
    else if (keepP)
      child = push_naive(make_small(std::move(p), s.level), s.child);
    else if (keepS)
      child = inject_naive(s.child, make_small(std::move(sf), s.level));
    else
      child = s.child;
    return finish_only(std::move(n), std::move(child), true);
  }

  // The left node of a pair ran out: its four remaining prefix elements and
  // its rear pair join the head of the right chain, which becomes an only
  // node.
  static ChainPtr merge_left_into_right(Node left, const ChainPtr& r) {
    Node h = head_node(*r);
    std::array<Elt, 8> front;
    for (std::size_t i = 0; i < 4; ++i) {
      auto [x, rest] = left.prefix.pop();
      front[i] = std::move(x);
      left.prefix = std::move(rest);
    }
    front[4] = left.pa;
    front[5] = left.pb;
    front[6] = h.pa;
    front[7] = h.pb;
    if (h.arity == 0) {
      Buf b = h.suffix;
      for (std::size_t i = 8; i > 0; --i) b = b.push(front[i - 1]);
      return only_end_chain(std::move(b));
    }
    Buf p;
    for (auto& x : front) p = p.inject(std::move(x));
    Node n;
    n.kind = NodeKind::Only;
    n.arity = h.arity;
    n.color = h.color;
    n.prefix = std::move(p);
    n.suffix = h.suffix;
    return replace_head(r, std::move(n));
  }

  static ChainPtr merge_right_into_left(const ChainPtr& l, Node right) {
    Node h = head_node(*l);
    std::array<Elt, 8> back;
    back[0] = h.pa;
    back[1] = h.pb;
    back[2] = right.pa;
    back[3] = right.pb;
    for (std::size_t i = 8; i > 4; --i) {
      auto [rest, x] = right.suffix.eject();
      back[i - 1] = std::move(x);
      right.suffix = std::move(rest);
    }
    if (h.arity == 0) {
      Buf b = h.prefix;
      for (auto& x : back) b = b.inject(std::move(x));
      return only_end_chain(std::move(b));
    }
    Buf s;
    for (auto& x : back) s = s.inject(std::move(x));
    Node n;
    n.kind = NodeKind::Only;
    n.arity = h.arity;
    n.color = h.color;
    n.prefix = h.prefix;
    n.suffix = std::move(s);
    return replace_head(l, std::move(n));
  }

  // Removes the first element. At the top (top = true) the root packets
  // are repaired; otherwise the result is only semi-regular. The chain must
  // be non-empty with green roots.
  static std::pair<Elt, ChainPtr> extract_front(const ChainPtr& c, bool top) {
    if (!c->pair) {
      if (!c->body && c->tail.end) {
        auto [x, b] = c->tail.prefix.pop();
        return {std::move(x), b.size() == 0 ? nullptr : only_end_chain(std::move(b))};
      }
      Triple t = triple_of_chain(c);
      auto [x, p] = t.node.prefix.pop();
      if (p.size() < 5) invariant_failed("pop: prefix of an only node fell below 5");
      t.node.prefix = std::move(p);
      t.node.color = natural_color(t.node);
      return {std::move(x), top ? regularize_top(std::move(t)) : chain_of_triple(t)};
    }
    Triple t = triple_of_chain(c->left);
    auto [x, p] = t.node.prefix.pop();
    t.node.prefix = std::move(p);
    if (t.node.prefix.size() >= 5) {
      t.node.color = natural_color(t.node);
      ChainPtr l = top ? regularize_top(std::move(t)) : chain_of_triple(t);
      return {std::move(x), pair_chain(std::move(l), c->right)};
    }
    if (t.node.arity != 0) invariant_failed("pop: left node of positive arity fell below 5");
    return {std::move(x), merge_left_into_right(std::move(t.node), c->right)};
  }

  static std::pair<ChainPtr, Elt> extract_back(const ChainPtr& c, bool top) {
    if (!c->pair) {
      if (!c->body && c->tail.end) {
        auto [b, x] = c->tail.prefix.eject();
        return {b.size() == 0 ? nullptr : only_end_chain(std::move(b)), std::move(x)};
      }
      Triple t = triple_of_chain(c);
      auto [s, x] = t.node.suffix.eject();
      if (s.size() < 5) invariant_failed("eject: suffix of an only node fell below 5");
      t.node.suffix = std::move(s);
      t.node.color = natural_color(t.node);
      return {top ? regularize_top(std::move(t)) : chain_of_triple(t), std::move(x)};
    }
    Triple t = triple_of_chain(c->right);
    auto [s, x] = t.node.suffix.eject();
    t.node.suffix = std::move(s);
    if (t.node.suffix.size() >= 5) {
      t.node.color = natural_color(t.node);
      ChainPtr r = top ? regularize_top(std::move(t)) : chain_of_triple(t);
      return {pair_chain(c->left, std::move(r)), std::move(x)};
    }
    if (t.node.arity != 0) invariant_failed("eject: right node of positive arity fell below 5");
    return {merge_right_into_left(c->left, std::move(t.node)), std::move(x)};
  }

  // Turns a chain of kind only with at least 7 elements into a left node
  // and its child.
  static Triple make_left(const ChainPtr& c) {
    if (!c->pair) {
      if (!c->body && c->tail.end) {
        Buf b = c->tail.prefix;
        auto [b1, y] = b.eject();
        auto [b2, x] = b1.eject();
        Node n;
        n.kind = NodeKind::Left;
        n.arity = 0;
        n.color = Hue4::green;
        n.prefix = std::move(b2);
        n.pa = std::move(x);
        n.pb = std::move(y);
        return Triple{std::move(n), nullptr};
      }
      Triple t = triple_of_chain(c);
      auto [s1, y] = t.node.suffix.eject();
      auto [s2, x] = s1.eject();
      std::uint32_t level = level_of(x) + 1;
      Node n;
      n.kind = NodeKind::Left;
      n.arity = t.node.arity;
      n.color = t.node.color;
      n.prefix = t.node.prefix;
      n.pa = std::move(x);
      n.pb = std::move(y);
      return Triple{std::move(n), inject_naive(t.child, make_small(std::move(s2), level))};
    }
    Triple tl = triple_of_chain(c->left), tr = triple_of_chain(c->right);
    auto [s1, y] = tr.node.suffix.eject();
    auto [s2, x] = s1.eject();
    std::uint32_t level = level_of(x) + 1;
    Buf p4 = Buf().inject(tl.node.pa).inject(tl.node.pb).inject(tr.node.pa).inject(tr.node.pb);
    ChainPtr child = inject_naive(tl.child, make_big(std::move(p4), tr.child, std::move(s2), level));
    Node n;
    n.kind = NodeKind::Left;
    n.arity = std::uint8_t(arity_of(child));
    n.prefix = tl.node.prefix;
    n.color = tl.child ? tl.node.color : buffer_color(n.prefix);
    n.pa = std::move(x);
    n.pb = std::move(y);
    return Triple{std::move(n), std::move(child)};
  }

  static Triple make_right(const ChainPtr& c) {
    if (!c->pair) {
      if (!c->body && c->tail.end) {
        Buf b = c->tail.prefix;
        auto [x, b1] = b.pop();
        auto [y, b2] = b1.pop();
        Node n;
        n.kind = NodeKind::Right;
        n.arity = 0;
        n.color = Hue4::green;
        n.suffix = std::move(b2);
        n.pa = std::move(x);
        n.pb = std::move(y);
        return Triple{std::move(n), nullptr};
      }
      Triple t = triple_of_chain(c);
      auto [x, p1] = t.node.prefix.pop();
      auto [y, p2] = p1.pop();
      std::uint32_t level = level_of(x) + 1;
      Node n;
      n.kind = NodeKind::Right;
      n.arity = t.node.arity;
      n.color = t.node.color;
      n.suffix = t.node.suffix;
      n.pa = std::move(x);
      n.pb = std::move(y);
      return Triple{std::move(n), push_naive(make_small(std::move(p2), level), t.child)};
    }
    Triple tl = triple_of_chain(c->left), tr = triple_of_chain(c->right);
    auto [x, p1] = tl.node.prefix.pop();
    auto [y, p2] = p1.pop();
    std::uint32_t level = level_of(x) + 1;
    Buf s4 = Buf().inject(tl.node.pa).inject(tl.node.pb).inject(tr.node.pa).inject(tr.node.pb);
    ChainPtr child = push_naive(make_big(std::move(p2), tl.child, std::move(s4), level), tr.child);
    Node n;
    n.kind = NodeKind::Right;
    n.arity = std::uint8_t(arity_of(child));
    n.suffix = tr.node.suffix;
    n.color = tr.child ? tr.node.color : buffer_color(n.suffix);
    n.pa = std::move(x);
    n.pb = std::move(y);
    return Triple{std::move(n), std::move(child)};
  }

  static Hue4Color buffer_color(const Buf& b) { return size_to_color(b.size()); }

  // Concatenation of two chains of kind only. With top set the operands
  // must be regular and so is the result; otherwise semi-regular operands
  // give a semi-regular result.
  static ChainPtr concat_chains(const ChainPtr& a, const ChainPtr& b, bool top) {
    if (!a) return b;
    if (!b) return a;
    if (is_small(a)) {
      ChainPtr r = b;
      std::vector<Elt> xs = a->tail.prefix.to_vector();
      for (auto it = xs.rbegin(); it != xs.rend(); ++it) r = push_naive(*it, r);
      return r;
    }
    if (is_small(b)) {
      ChainPtr r = a;
      b->tail.prefix.for_each([&](const Elt& x) { r = inject_naive(r, x); });
      return r;
    }
    Triple l = make_left(a), r = make_right(b);
    if (top) {
      ChainPtr lc = regularize_top(std::move(l));
      ChainPtr rc = regularize_top(std::move(r));
      return pair_chain(std::move(lc), std::move(rc));
    }
    return pair_chain(chain_of_triple(l), chain_of_triple(r));
  }

  // ---- model function ----

  template <class F>
  static void visit_elt(const Elt& e, F& f) {
    if (e.index() == 1) {
      f(std::get<1>(e));
      return;
    }
    const Stored& s = *std::get<0>(e);
    visit_buf(s.prefix, f);
    if (s.big) {
      visit_chain(s.child, f);
      visit_buf(s.suffix, f);
    }
  }

  template <class F>
  static void visit_buf(const Buf& b, F& f) {
    b.for_each([&](const Elt& e) { visit_elt(e, f); });
  }

  template <class F>
  static void visit_node_front(const Node& n, F& f) {
    if (n.kind == NodeKind::Right) {
      visit_elt(n.pa, f);
      visit_elt(n.pb, f);
    } else {
      visit_buf(n.prefix, f);
    }
  }

  template <class F>
  static void visit_node_back(const Node& n, F& f) {
    if (n.kind == NodeKind::Left) {
      visit_elt(n.pa, f);
      visit_elt(n.pb, f);
    } else if (!n.end) {
      visit_buf(n.suffix, f);
    }
  }

  template <class F>
  static void visit_body(const BodyFrame* b, const ChainNode& c, F& f) {
    if (!b) {
      visit_node_front(c.tail, f);
      visit_chain(c.child, f);
      visit_node_back(c.tail, f);
      return;
    }
    visit_node_front(b->node, f);
    if (b->tag == BodyTag::PairOrange) visit_chain(b->other, f);
    visit_body(b->cont.get(), c, f);
    if (b->tag == BodyTag::PairYellow) visit_chain(b->other, f);
    visit_node_back(b->node, f);
  }

  template <class F>
  static void visit_chain(const ChainPtr& c, F& f) {
    if (!c) return;
    if (c->pair) {
      visit_chain(c->left, f);
      visit_chain(c->right, f);
      return;
    }
    visit_body(c->body.get(), *c, f);
  }

  // ---- validator ----

  enum class Expect : std::uint8_t { Only, Left, Right };

  struct Checker {
    ValidationCache& cache;
    std::vector<std::string> out;

    void fail(const std::string& where, const std::string& what) { out.push_back(where + ": " + what); }

    static bool kind_matches(NodeKind k, Expect e) {
      return (e == Expect::Only && k == NodeKind::Only) || (e == Expect::Left && k == NodeKind::Left) ||
             (e == Expect::Right && k == NodeKind::Right);
    }

    std::size_t elt(const Elt& e, std::uint32_t level, const std::string& where) {
      if (level == 0) {
        if (e.index() != 1) {
          fail(where, "level-0 element is not a value");
          return 0;
        }
        return 1;
      }
      if (e.index() != 0 || !std::get<0>(e)) {
        fail(where, "expected a stored triple at level " + std::to_string(level));
        return 0;
      }
      const Stored& s = *std::get<0>(e);
      if (auto it = cache.counts.find(&s); it != cache.counts.end()) return it->second;
      std::size_t before = out.size();
      std::size_t n = 0;
      if (s.level != level) fail(where, "stored triple tagged level " + std::to_string(s.level) + " at level " + std::to_string(level));
      if (s.prefix.size() < 3) fail(where, s.big ? "big triple prefix below 3" : "small triple buffer below 3");
      n += buf(s.prefix, level - 1, where + "/stored");
      if (s.big) {
        if (s.suffix.size() < 3) fail(where, "big triple suffix below 3");
        n += chain(s.child, level, Expect::Only, -1, where + "/stored-child");
        n += buf(s.suffix, level - 1, where + "/stored");
      } else if (s.child || s.suffix.size() != 0) {
        fail(where, "small triple carries a child or suffix");
      }
      if (out.size() == before) cache.counts.emplace(&s, n);
      return n;
    }

    std::size_t buf(const Buf& b, std::uint32_t level, const std::string& where) {
      for (auto& v : b.validate()) fail(where, "buffer: " + v);
      std::size_t n = 0;
      b.for_each([&](const Elt& e) { n += elt(e, level, where); });
      return n;
    }

    std::size_t node(const Node& nd, std::uint32_t level, Expect kind, int arity, const std::string& where) {
      std::size_t n = 0;
      if (!kind_matches(nd.kind, kind)) fail(where, "node kind " + std::string(name(nd.kind)) + " out of place");
      if (arity >= 0 && nd.arity != arity) fail(where, "node arity does not match its children");
      if (nd.color.uncolored()) fail(where, "node is uncolored");
      if (nd.arity == 0 && !nd.color.green()) fail(where, "arity-0 node is not green");
      if (nd.arity > 2) fail(where, "arity above 2");
      const long need = nd.arity == 0 ? 0 : min_delta(nd.color);
      auto check_size = [&](const Buf& b, const char* which) {
        if (b.size() < 5) fail(where, std::string(which) + " below 5");
        else if (long(b.size()) - 5 < need)
          fail(where, std::string(which) + " too small for a " + std::string(nd.color.name()) + " node");
      };
      if (nd.end) {
        if (nd.kind != NodeKind::Only) fail(where, "end node of the wrong kind");
        if (nd.arity != 0) fail(where, "end node with children");
        if (nd.prefix.size() < 1) fail(where, "end node with an empty buffer");
        if (nd.suffix.size() != 0) fail(where, "end node with a suffix");
        return buf(nd.prefix, level, where);
      }
      switch (nd.kind) {
        case NodeKind::Only:
          if (nd.arity == 0) fail(where, "only node of arity 0 must be an end node");
          check_size(nd.prefix, "prefix");
          check_size(nd.suffix, "suffix");
          n += buf(nd.prefix, level, where) + buf(nd.suffix, level, where);
          break;
        case NodeKind::Left:
          check_size(nd.prefix, "prefix");
          n += buf(nd.prefix, level, where) + elt(nd.pa, level, where) + elt(nd.pb, level, where);
          break;
        case NodeKind::Right:
          check_size(nd.suffix, "suffix");
          n += elt(nd.pa, level, where) + elt(nd.pb, level, where) + buf(nd.suffix, level, where);
          break;
      }
      return n;
    }

    // Validates a chain whose top nodes hold elements of `level`. arity -1
    // accepts any arity.
    std::size_t chain(const ChainPtr& c, std::uint32_t level, Expect kind, int arity, const std::string& where) {
      if (!c) {
        if (arity > 0) fail(where, "empty chain where arity " + std::to_string(arity) + " is required");
        if (kind != Expect::Only) fail(where, "empty chain where a left or right chain is required");
        return 0;
      }
      if (c->pair) {
        if (arity >= 0 && arity != 2) fail(where, "pair chain where arity " + std::to_string(arity) + " is required");
        if (kind != Expect::Only) fail(where, "pair chain of the wrong kind");
        if (!c->left || !c->right || c->left->pair || c->right->pair) {
          fail(where, "pair chain with a missing or non-single side");
          return 0;
        }
        return chain(c->left, level, Expect::Left, 1, where + "/L") + chain(c->right, level, Expect::Right, 1, where + "/R");
      }
      if (arity >= 0 && arity != 1) fail(where, "single chain where arity " + std::to_string(arity) + " is required");
      std::size_t n = 0;
      std::uint32_t lv = level;
      Expect k = kind;
      std::size_t depth = 0;
      for (const BodyFrame* b = c->body.get(); b; b = b->cont.get(), ++lv, ++depth) {
        std::string at = where + "/body" + std::to_string(depth);
        const Node& nd = b->node;
        switch (b->tag) {
          case BodyTag::SingleChild:
            if (!(nd.color.yellow() || nd.color.orange())) fail(at, "single-child body node is not yellow or orange");
            n += node(nd, lv, k, 1, at);
            k = Expect::Only;
            break;
          case BodyTag::PairOrange:
            if (!nd.color.orange()) fail(at, "pair-orange body node is not orange");
            n += node(nd, lv, k, 2, at);
            if (!b->other || b->other->pair) fail(at, "orange node's left chain is not single");
            else if (!b->other->tail.color.green()) fail(at, "orange node's left chain is not green");
            n += chain(b->other, lv + 1, Expect::Left, 1, at + "/left");
            k = Expect::Right;
            break;
          case BodyTag::PairYellow:
            if (!nd.color.yellow()) fail(at, "pair-yellow body node is not yellow");
            n += node(nd, lv, k, 2, at);
            if (!b->other || b->other->pair) fail(at, "yellow node's right chain is not single");
            n += chain(b->other, lv + 1, Expect::Right, 1, at + "/right");
            k = Expect::Left;
            break;
        }
      }
      std::string at = where + "/tail";
      const Node& t = c->tail;
      if (!t.color.green_or_red()) fail(at, "tail node is neither green nor red");
      if (t.color != packet_color(c->reg)) fail(at, "witness " + std::string(name(c->reg)) + " does not match tail color");
      n += node(t, lv, k, arity_of(c->child), at);
      if (c->reg == Regularity4::R && !roots_green(c->child)) fail(at, "child of a red packet is not green");
      n += chain(c->child, lv + 1, Expect::Only, -1, at + "/child");
      return n;
    }
  };

  ChainPtr chain_;
  std::size_t length_ = 0;
};

}  // namespace ktdeque
