#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ktdeque/colors.hpp"

// Redundant binary numbers with digits 0, 1, 2, least significant first.
// A number is a chain of packets; each packet is a head digit followed by a
// (possibly empty) run of yellow 1 digits.
namespace ktdeque::rbr {

struct YellowDigit;
// A run of 1 digits; nullptr is the hole at the end of a packet.
using Body = std::shared_ptr<const YellowDigit>;

struct YellowDigit {
  Body next;
};

struct Packet {
  std::uint8_t head;  // 0 green, 1 yellow, 2 red
  Body body;
};

struct Link;
// nullptr is the empty chain, which is green.
using Chain = std::shared_ptr<const Link>;

struct Link {
  Regularity3 reg;
  Packet packet;
  Chain rest;
};

Hue3Color digit_color(std::uint8_t d);
Hue3Color chain_color(const Chain& c);

// Parses a digit string (least significant first, spaces ignored) into
// packets and attaches the regularity witness each link admits. Throws
// std::domain_error on characters outside 0-2 or on an irregular layout.
Chain chain_from_digits(std::string_view digits);

std::string digits(const Chain& c);
// Same digits, packets separated by one space.
std::string render(const Chain& c);

// Sum of d_i * 2^i. Throws std::overflow_error past 64 bits.
std::uint64_t chain_value(const Chain& c);

// Requires a red top packet; throws std::domain_error otherwise.
Chain green_of_red(const Chain& c);
// Requires a green or red chain; throws std::domain_error on yellow.
Chain ensure_green(const Chain& c);

// Empty vector means valid. Checks stored witnesses against packet colors
// and next-chain colors, and that yellow packets only appear on top.
std::vector<std::string> validate_chain(const Chain& c);

class Number {
 public:
  Number() = default;
  static Number zero() { return Number(); }
  // Throws std::domain_error if the digits describe a red chain.
  static Number from_digits(std::string_view d);

  const Chain& chain() const noexcept { return chain_; }
  std::uint64_t value() const { return chain_value(chain_); }
  std::string digits() const { return rbr::digits(chain_); }
  std::string render() const { return rbr::render(chain_); }

  friend Number succ(const Number& n);
  friend std::vector<std::string> validate(const Number& n);

 private:
  explicit Number(Chain c) : chain_(std::move(c)) {}
  Chain chain_;
};

Number succ(const Number& n);
std::vector<std::string> validate(const Number& n);

}  // namespace ktdeque::rbr
