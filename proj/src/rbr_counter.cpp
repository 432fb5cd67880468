#include "ktdeque/rbr_counter.hpp"

#include <stdexcept>
#include <utility>

#include "ktdeque/errors.hpp"
#include "ktdeque/work_counter.hpp"

namespace ktdeque::rbr {

namespace {

Body yellow(Body next) {
  work::note_construction();
  return std::make_shared<const YellowDigit>(YellowDigit{std::move(next)});
}

Chain link(Regularity3 reg, std::uint8_t head, Body body, Chain rest) {
  work::note_construction();
  return std::make_shared<const Link>(Link{reg, Packet{head, std::move(body)}, std::move(rest)});
}

}  // namespace

Hue3Color digit_color(std::uint8_t d) {
  switch (d) {
    case 0: return Hue3::green;
    case 1: return Hue3::yellow;
    case 2: return Hue3::red;
    default: throw std::domain_error("digit out of range");
  }
}

Hue3Color chain_color(const Chain& c) { return c ? digit_color(c->packet.head) : Hue3::green; }

Chain chain_from_digits(std::string_view text) {
  std::vector<std::uint8_t> ds;
  for (char ch : text) {
    if (ch == ' ') continue;
    if (ch < '0' || ch > '2') throw std::domain_error("chain_from_digits: bad digit '" + std::string(1, ch) + "'");
    ds.push_back(std::uint8_t(ch - '0'));
  }
  // Split into packets: a head at position 0 or at any 0/2, then a run of 1s.
  std::vector<std::pair<std::uint8_t, std::size_t>> packets;  // head, body length
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i == 0 || ds[i] != 1)
      packets.emplace_back(ds[i], 0);
    else
      ++packets.back().second;
  }
  Chain c;
  for (auto it = packets.rbegin(); it != packets.rend(); ++it) {
    Hue3Color next = chain_color(c);
    Regularity3 reg = it->first == 0 ? Regularity3::G : it->first == 1 ? Regularity3::Y : Regularity3::R;
    if (!admits_next(reg, next))
      throw std::domain_error("chain_from_digits: irregular chain '" + std::string(text) + "'");
    Body b;
    for (std::size_t k = 0; k < it->second; ++k) b = yellow(b);
    c = link(reg, it->first, b, c);
  }
  return c;
}

std::string digits(const Chain& c) {
  std::string out;
  for (const Link* l = c.get(); l; l = l->rest.get()) {
    out.push_back(char('0' + l->packet.head));
    for (const YellowDigit* y = l->packet.body.get(); y; y = y->next.get()) out.push_back('1');
  }
  return out;
}

std::string render(const Chain& c) {
  std::string out;
  for (const Link* l = c.get(); l; l = l->rest.get()) {
    if (!out.empty()) out.push_back(' ');
    out.push_back(char('0' + l->packet.head));
    for (const YellowDigit* y = l->packet.body.get(); y; y = y->next.get()) out.push_back('1');
  }
  return out;
}

std::uint64_t chain_value(const Chain& c) {
  std::uint64_t value = 0;
  unsigned pos = 0;
  auto add = [&](std::uint64_t d) {
    if (d != 0) {
      if (pos >= 64 || (d == 2 && pos >= 63)) throw std::overflow_error("chain_value: exceeds 64 bits");
      std::uint64_t term = d << pos;
      if (value > UINT64_MAX - term) throw std::overflow_error("chain_value: exceeds 64 bits");
      value += term;
    }
    ++pos;
  };
  for (const Link* l = c.get(); l; l = l->rest.get()) {
    add(l->packet.head);
    for (const YellowDigit* y = l->packet.body.get(); y; y = y->next.get()) add(1);
  }
  return value;
}

Chain green_of_red(const Chain& c) {
  if (!c || c->packet.head != 2) throw std::domain_error("green_of_red: chain is not red");
  const Body& body = c->packet.body;
  if (!body) {
    if (!c->rest) return link(Regularity3::G, 0, yellow(nullptr), nullptr);
    const Link& next = *c->rest;
    if (next.packet.head != 0) invariant_failed("green_of_red: red packet followed by a non-green chain");
    return link(Regularity3::G, 0, yellow(next.packet.body), next.rest);
  }
  return link(Regularity3::G, 0, nullptr, link(Regularity3::R, 2, body->next, c->rest));
}

Chain ensure_green(const Chain& c) {
  if (!c) return c;
  switch (c->packet.head) {
    case 0: return c;
    case 2: return green_of_red(c);
    default: throw std::domain_error("ensure_green: chain is yellow");
  }
}

std::vector<std::string> validate_chain(const Chain& c) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const Link* l = c.get(); l; l = l->rest.get(), ++i) {
    const std::string at = "packet " + std::to_string(i) + ": ";
    if (l->packet.head > 2) {
      out.push_back(at + "head digit out of range");
      continue;
    }
    Hue3Color col = digit_color(l->packet.head);
    if (col != packet_color(l->reg))
      out.push_back(at + "witness " + std::string(name(l->reg)) + " does not match " + std::string(col.name()) + " packet");
    Hue3Color next = l->rest && l->rest->packet.head <= 2 ? chain_color(l->rest) : Hue3::green;
    if (!admits_next(l->reg, next))
      out.push_back(at + "witness " + std::string(name(l->reg)) + " forbids a " + std::string(next.name()) + " next chain");
    if (i > 0 && col.yellow()) out.push_back(at + "yellow packet below the top");
  }
  return out;
}

Number Number::from_digits(std::string_view d) {
  Chain c = chain_from_digits(d);
  if (chain_color(c).red()) throw std::domain_error("Number::from_digits: red chain is not a number");
  return Number(std::move(c));
}

Number succ(const Number& n) {
  const Chain& c = n.chain_;
  if (!c) return Number(link(Regularity3::Y, 1, nullptr, nullptr));
  switch (c->packet.head) {
    case 0: return Number(link(Regularity3::Y, 1, c->packet.body, ensure_green(c->rest)));
    case 1: return Number(green_of_red(link(Regularity3::R, 2, c->packet.body, c->rest)));
    default: invariant_failed("succ: number has a red top packet");
  }
}

std::vector<std::string> validate(const Number& n) {
  auto out = validate_chain(n.chain_);
  if (n.chain_ && n.chain_->packet.head == 2) out.push_back("top chain is red");
  return out;
}

}  // namespace ktdeque::rbr
