#include "ktdeque/colors.hpp"

#include <stdexcept>
#include <string>

namespace ktdeque {

namespace {

void require_single_bit(int bits, const char* what) {
  if (bits > 1) throw std::domain_error(std::string(what) + ": more than one hue bit set");
}

}  // namespace

Hue3Color::Hue3Color(bool green, bool yellow, bool red) : green_(green), yellow_(yellow), red_(red) {
  require_single_bit(int(green) + int(yellow) + int(red), "Hue3Color");
}

int Hue3Color::rank() const {
  if (red_) return 0;
  if (yellow_) return 1;
  if (green_) return 2;
  throw std::domain_error("Hue3Color::rank: uncolored");
}

std::string_view Hue3Color::name() const noexcept {
  if (green_) return "green";
  if (yellow_) return "yellow";
  if (red_) return "red";
  return "uncolored";
}

Hue4Color::Hue4Color(bool green, bool yellow, bool orange, bool red)
    : green_(green), yellow_(yellow), orange_(orange), red_(red) {
  require_single_bit(int(green) + int(yellow) + int(orange) + int(red), "Hue4Color");
}

int Hue4Color::rank() const {
  if (red_) return 0;
  if (orange_) return 1;
  if (yellow_) return 2;
  if (green_) return 3;
  throw std::domain_error("Hue4Color::rank: uncolored");
}

std::string_view Hue4Color::name() const noexcept {
  if (green_) return "green";
  if (yellow_) return "yellow";
  if (orange_) return "orange";
  if (red_) return "red";
  return "uncolored";
}

std::strong_ordering color_order(Hue4Color a, Hue4Color b) {
  if (a.uncolored() || b.uncolored()) throw std::domain_error("color_order: uncolored operand");
  return a.rank() <=> b.rank();
}

Hue4Color worst(Hue4Color a, Hue4Color b) { return color_order(a, b) < 0 ? a : b; }

Hue4Color hue4_of_rank(int rank) {
  switch (rank) {
    case 0: return Hue4::red;
    case 1: return Hue4::orange;
    case 2: return Hue4::yellow;
    case 3: return Hue4::green;
    default: throw std::domain_error("hue4_of_rank: rank out of range");
  }
}

Hue4Color size_to_color(std::size_t n) {
  if (n < 5) throw std::domain_error("size_to_color: sizes below 5 carry no color");
  if (n == 5) return Hue4::red;
  if (n == 6) return Hue4::orange;
  if (n == 7) return Hue4::yellow;
  return Hue4::green;
}

Hue3Color packet_color(Regularity3 r) noexcept {
  switch (r) {
    case Regularity3::G: return Hue3::green;
    case Regularity3::Y: return Hue3::yellow;
    case Regularity3::R: return Hue3::red;
  }
  return Hue3::uncolored;
}

bool admits_next(Regularity3 r, Hue3Color next) noexcept {
  switch (r) {
    case Regularity3::G: return !next.yellow() && !next.uncolored();
    case Regularity3::Y:
    case Regularity3::R: return next.green();
  }
  return false;
}

std::string_view name(Regularity3 r) noexcept {
  switch (r) {
    case Regularity3::G: return "G";
    case Regularity3::Y: return "Y";
    case Regularity3::R: return "R";
  }
  return "?";
}

Hue4Color packet_color(Regularity4 r) noexcept {
  return r == Regularity4::G ? Hue4::green : Hue4::red;
}

bool admits_next(Regularity4 r, Hue4Color next) noexcept {
  return r == Regularity4::G ? next.green_or_red() : next.green();
}

std::string_view name(Regularity4 r) noexcept { return r == Regularity4::G ? "G" : "R"; }

}  // namespace ktdeque
