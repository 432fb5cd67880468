#pragma once

#include <compare>
#include <cstddef>
#include <string_view>

namespace ktdeque {

// Colors are carried as explicit hue bits rather than an enumeration, so that
// a set of admissible colors ("not yellow", "yellow or uncolored") is a mask
// test. At most one bit may be set; none set means uncolored.
class Hue3Color {
 public:
  constexpr Hue3Color() = default;
  // Throws std::domain_error when more than one hue bit is set.
  Hue3Color(bool green, bool yellow, bool red);

  constexpr bool green() const noexcept { return green_; }
  constexpr bool yellow() const noexcept { return yellow_; }
  constexpr bool red() const noexcept { return red_; }
  constexpr bool uncolored() const noexcept { return !green_ && !yellow_ && !red_; }

  // 0 = red, 1 = yellow, 2 = green. Throws std::domain_error if uncolored.
  int rank() const;
  std::string_view name() const noexcept;

  friend constexpr bool operator==(const Hue3Color&, const Hue3Color&) = default;

 private:
  struct Unchecked {};
  constexpr Hue3Color(Unchecked, bool g, bool y, bool r) : green_(g), yellow_(y), red_(r) {}
  friend struct Hue3;

  bool green_ = false;
  bool yellow_ = false;
  bool red_ = false;
};

struct Hue3 {
  static constexpr Hue3Color green{Hue3Color::Unchecked{}, true, false, false};
  static constexpr Hue3Color yellow{Hue3Color::Unchecked{}, false, true, false};
  static constexpr Hue3Color red{Hue3Color::Unchecked{}, false, false, true};
  static constexpr Hue3Color uncolored{};
};

class Hue4Color {
 public:
  constexpr Hue4Color() = default;
  // Throws std::domain_error when more than one hue bit is set.
  Hue4Color(bool green, bool yellow, bool orange, bool red);

  constexpr bool green() const noexcept { return green_; }
  constexpr bool yellow() const noexcept { return yellow_; }
  constexpr bool orange() const noexcept { return orange_; }
  constexpr bool red() const noexcept { return red_; }
  constexpr bool uncolored() const noexcept { return !green_ && !yellow_ && !orange_ && !red_; }
  constexpr bool green_or_red() const noexcept { return green_ || red_; }

  // 0 = red, 1 = orange, 2 = yellow, 3 = green. Throws std::domain_error if uncolored.
  int rank() const;
  std::string_view name() const noexcept;

  friend constexpr bool operator==(const Hue4Color&, const Hue4Color&) = default;

 private:
  struct Unchecked {};
  constexpr Hue4Color(Unchecked, bool g, bool y, bool o, bool r)
      : green_(g), yellow_(y), orange_(o), red_(r) {}
  friend struct Hue4;

  bool green_ = false;
  bool yellow_ = false;
  bool orange_ = false;
  bool red_ = false;
};

struct Hue4 {
  static constexpr Hue4Color green{Hue4Color::Unchecked{}, true, false, false, false};
  static constexpr Hue4Color yellow{Hue4Color::Unchecked{}, false, true, false, false};
  static constexpr Hue4Color orange{Hue4Color::Unchecked{}, false, false, true, false};
  static constexpr Hue4Color red{Hue4Color::Unchecked{}, false, false, false, true};
  static constexpr Hue4Color uncolored{};
};

// red < orange < yellow < green. Throws std::domain_error on an uncolored operand.
std::strong_ordering color_order(Hue4Color a, Hue4Color b);

// The worse of two proper colors.
Hue4Color worst(Hue4Color a, Hue4Color b);

// Inverse of rank(): 0 = red ... 3 = green.
Hue4Color hue4_of_rank(int rank);

// Buffer-size coloring used by catenable deques: 5 red, 6 orange, 7 yellow,
// 8 and above green. Throws std::domain_error below 5.
Hue4Color size_to_color(std::size_t n);

// Relation between a packet's color and the color of the chain that follows
// it, for redundant binary numbers and non-catenable deques.
enum class Regularity3 : unsigned char { G, Y, R };

// The packet color a witness demands.
Hue3Color packet_color(Regularity3 r) noexcept;
// Whether a chain of color `next` may follow a packet carrying witness `r`:
// G admits green or red, Y and R admit green only.
bool admits_next(Regularity3 r, Hue3Color next) noexcept;
std::string_view name(Regularity3 r) noexcept;

// Same relation for catenable deques, where packets are green or red.
// G: following packets unconstrained. R: following packets must be green.
enum class Regularity4 : unsigned char { G, R };

Hue4Color packet_color(Regularity4 r) noexcept;
bool admits_next(Regularity4 r, Hue4Color next) noexcept;
std::string_view name(Regularity4 r) noexcept;

}  // namespace ktdeque
