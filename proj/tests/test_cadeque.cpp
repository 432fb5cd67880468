#include <doctest.h>

#include <random>
#include <vector>

#include "ktdeque/cadeque.hpp"
#include "ktdeque/oracle.hpp"

using namespace ktdeque;
using C = Cadeque<int>;
using O = OracleSeq<int>;

namespace {

std::vector<int> iota_vec(int from, int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = from + i;
  return v;
}

C build(int from, int n) {
  C c;
  for (int i = 0; i < n; ++i) c = c.inject(from + i);
  return c;
}

void require_valid(const C& c) {
  auto errs = c.validate();
  INFO((errs.empty() ? std::string() : errs.front()));
  REQUIRE(errs.empty());
}

}  // namespace

TEST_CASE("empty cadeque") {
  C c;
  CHECK(c.size() == 0);
  CHECK_FALSE(c.pop().has_value());
  CHECK_FALSE(c.eject().has_value());
  CHECK(c.validate().empty());
  CHECK(C::concat(c, c).is_empty());
}

TEST_CASE("singletons and mixed push and inject") {
  auto p = C().push(9).pop();
  REQUIRE(p);
  CHECK(p->first == 9);
  CHECK(p->second.is_empty());
  CHECK(p->second.validate().empty());

  C c;
  O o;
  std::mt19937 rng(50);
  for (int i = 0; i < 50; ++i) {
    if (rng() & 1) {
      c = c.push(i);
      o = o.push(i);
    } else {
      c = c.inject(i);
      o = o.inject(i);
    }
    require_valid(c);
  }
  CHECK(c.to_vector() == o.items());
}

TEST_CASE("concat of small sequences") {
  C a = C().push(2).push(1);
  C b = C().push(3);
  C ab = C::concat(a, b);
  CHECK(ab.to_vector() == std::vector<int>{1, 2, 3});
  require_valid(ab);
  CHECK(a.to_vector() == std::vector<int>{1, 2});
  CHECK(b.to_vector() == std::vector<int>{3});
}

TEST_CASE("concat of two large cadeques then drain") {
  C a = build(0, 4096), b = build(4096, 4096);
  C ab = C::concat(a, b);
  require_valid(ab);
  CHECK(ab.to_vector() == iota_vec(0, 8192));
  C x = ab;
  for (int k = 0; k < 2048; ++k) {
    auto p = x.pop();
    REQUIRE(p);
    CHECK(p->first == k);
    auto e = p->second.eject();
    REQUIRE(e);
    CHECK(e->second == 8191 - k);
    x = e->first;
  }
  CHECK(x.to_vector() == iota_vec(2048, 4096));
  require_valid(x);
}

TEST_CASE("concat work on large operands stays within the small-input bound") {
  // Bound: the largest concat work over all operands of up to 40 elements,
  // each built by injects or by pushes.
  std::vector<C> small;
  for (int n = 0; n <= 40; ++n) {
    small.push_back(build(0, n));
    C p;
    for (int i = n - 1; i >= 0; --i) p = p.push(i);
    small.push_back(p);
  }
  std::uint64_t bound = 0;
  for (const C& a : small)
    for (const C& b : small) {
      work::Scope s;
      C r = C::concat(a, b);
      bound = std::max(bound, s.read());
    }

  // Operands of 2^12 elements grown by a seeded mix of operations.
  auto grow = [](std::uint32_t seed) {
    std::mt19937 rng(seed);
    C c;
    std::vector<C> parts;
    while (c.size() < 4096) {
      unsigned r = rng() % 8;
      if (r < 3) c = c.push(int(c.size()));
      else if (r < 6) c = c.inject(int(c.size()));
      else if (r == 6 && c.size() > 0) c = c.pop()->second;
      else if (!parts.empty() && c.size() + parts.back().size() <= 4096) c = C::concat(c, parts.back());
      if (rng() % 64 == 0) parts.push_back(c);
    }
    while (c.size() > 4096) c = c.eject()->first;
    return c;
  };
  C a = grow(1), b = grow(2);
  REQUIRE(a.size() == 4096);
  REQUIRE(b.size() == 4096);
  std::vector<int> expect = a.to_vector();
  for (int x : b.to_vector()) expect.push_back(x);
  work::Scope s;
  C ab = C::concat(a, b);
  std::uint64_t big = s.read();
  MESSAGE("concat work: 2^12 operands " << big << ", small-input bound " << bound);
  CHECK(ab.to_vector() == expect);
  require_valid(ab);
  CHECK(big <= bound);
}

TEST_CASE("drain ten thousand elements from both ends") {
  C c = build(0, 10000);
  require_valid(c);
  int lo = 0, hi = 9999;
  std::mt19937 rng(7);
  while (!c.is_empty()) {
    if (rng() & 1) {
      auto p = c.pop();
      REQUIRE(p);
      REQUIRE(p->first == lo++);
      c = p->second;
    } else {
      auto e = c.eject();
      REQUIRE(e);
      REQUIRE(e->second == hi--);
      c = e->first;
    }
  }
  CHECK(lo == hi + 1);
}

TEST_CASE("repeated self concat") {
  C c = build(0, 3);
  O o(iota_vec(0, 3));
  for (int i = 0; i < 12; ++i) {
    c = C::concat(c, c);
    o = O::concat(o, o);
    require_valid(c);
    CHECK(c.to_vector() == o.items());
  }
  for (int i = 0; i < 2000; ++i) {
    auto p = c.pop();
    auto e = p->second.eject();
    c = e->first;
    o = o.pop()->second.eject()->first;
  }
  require_valid(c);
  CHECK(c.to_vector() == o.items());
}

TEST_CASE("random differential against the oracle with a persistent pool") {
  std::mt19937_64 rng(12345);
  std::vector<C> pool{C()};
  std::vector<O> ref{O()};
  std::vector<std::vector<int>> snapshot{{}};
  C::ValidationCache cache;
  std::uint64_t max_work = 0;
  for (int step = 0; step < 6000; ++step) {
    std::size_t i = pool.size() - 1 - std::min<std::size_t>(rng() % 4 == 0 ? rng() % pool.size() : 0, pool.size() - 1);
    int op = int(rng() % 10);
    int v = int(rng() % 1000);
    C next;
    O onext;
    work::Scope scope;
    if (op < 2) {
      next = pool[i].push(v);
      onext = ref[i].push(v);
    } else if (op < 4) {
      next = pool[i].inject(v);
      onext = ref[i].inject(v);
    } else if (op < 6) {
      auto p = pool[i].pop();
      auto q = ref[i].pop();
      REQUIRE(p.has_value() == q.has_value());
      if (!p) continue;
      CHECK(p->first == q->first);
      next = p->second;
      onext = q->second;
    } else if (op < 8) {
      auto p = pool[i].eject();
      auto q = ref[i].eject();
      REQUIRE(p.has_value() == q.has_value());
      if (!p) continue;
      CHECK(p->second == q->second);
      next = p->first;
      onext = q->first;
    } else {
      std::size_t j = rng() % pool.size();
      if (ref[i].size() + ref[j].size() > 20000) continue;
      next = C::concat(pool[i], pool[j]);
      onext = O::concat(ref[i], ref[j]);
    }
    max_work = std::max(max_work, scope.read());
    auto errs = next.validate(&cache);
    INFO("step " << step << (errs.empty() ? std::string() : ": " + errs.front()));
    REQUIRE(errs.empty());
    REQUIRE(next.size() == onext.size());
    REQUIRE(next.to_vector() == onext.items());
    REQUIRE(pool[i].to_vector() == snapshot[i]);
    pool.push_back(next);
    ref.push_back(onext);
    snapshot.push_back(onext.items());
  }
  MESSAGE("max constructions per operation: " << max_work);
  CHECK(max_work < 2000);
}

TEST_CASE("validator flags a red packet over a red child") {
  C::Node red_only;
  red_only.kind = NodeKind::Only;
  red_only.arity = 1;
  red_only.color = Hue4::red;
  for (int i = 0; i < 5; ++i) {
    red_only.prefix = red_only.prefix.inject(C::Elt(std::in_place_index<1>, i));
    red_only.suffix = red_only.suffix.inject(C::Elt(std::in_place_index<1>, i));
  }
  // Level-1 buffer with one small stored triple of three values.
  SBuffer<C::Elt> three;
  for (int i = 0; i < 3; ++i) three = three.inject(C::Elt(std::in_place_index<1>, i));
  auto st = std::make_shared<const C::Stored>(C::Stored{1, false, three, nullptr, {}});
  C::Node inner = red_only;
  inner.prefix = inner.suffix = {};
  for (int i = 0; i < 5; ++i) {
    inner.prefix = inner.prefix.inject(C::Elt(std::in_place_index<0>, st));
    inner.suffix = inner.suffix.inject(C::Elt(std::in_place_index<0>, st));
  }
  inner.arity = 0;
  inner.color = Hue4::green;
  inner.end = true;
  inner.suffix = {};
  auto end_chain = std::make_shared<C::ChainNode>();
  end_chain->tail = inner;
  auto mid = std::make_shared<C::ChainNode>();
  mid->reg = Regularity4::R;
  C::Node mid_node = inner;
  mid_node.end = false;
  mid_node.arity = 1;
  mid_node.color = Hue4::red;
  for (int i = 0; i < 5; ++i) mid_node.suffix = mid_node.suffix.inject(C::Elt(std::in_place_index<0>, st));
  mid->tail = mid_node;
  mid->child = end_chain;
  auto top = std::make_shared<C::ChainNode>();
  top->reg = Regularity4::R;
  top->tail = red_only;
  top->child = mid;
  C bad = C::from_chain_unchecked(top, 10 + 3 * 5 * 2);
  auto errs = bad.validate();
  bool saw_red = false, saw_top = false;
  for (auto& e : errs) {
    if (e.find("child of a red packet is not green") != std::string::npos) saw_red = true;
    if (e.find("root packet is not green") != std::string::npos) saw_top = true;
  }
  CHECK(saw_red);
  CHECK(saw_top);
}

TEST_CASE("coloring witness") {
  C c = build(0, 40);
  C d = C::concat(c, c);
  const auto& h = C::head_node(*d.chain()->left);
  auto w = C::coloring_of(h);
  CHECK(w.arity == h.arity);
  CHECK(w.prefix_delta == long(h.prefix.size()) - 5);
  CHECK(C::natural_color(h) == size_to_color(h.prefix.size()));
}
