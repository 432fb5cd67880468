#include <doctest.h>

#include <array>
#include <stdexcept>

#include "ktdeque/colors.hpp"

using namespace ktdeque;

namespace {
const std::array<Hue4Color, 4> kProper{Hue4::red, Hue4::orange, Hue4::yellow, Hue4::green};
}

TEST_CASE("hue constructors reject more than one bit") {
  CHECK_NOTHROW(Hue3Color(true, false, false));
  CHECK_NOTHROW(Hue3Color(false, false, false));
  CHECK_THROWS_AS(Hue3Color(true, true, false), std::domain_error);
  CHECK_THROWS_AS(Hue4Color(false, true, false, true), std::domain_error);
  CHECK(Hue4Color(false, false, true, false) == Hue4::orange);
  CHECK(Hue4::uncolored.uncolored());
}

TEST_CASE("color_order") {
  CHECK(color_order(Hue4::red, Hue4::green) < 0);
  CHECK(color_order(Hue4::yellow, Hue4::yellow) == 0);
  CHECK(color_order(Hue4::orange, Hue4::yellow) < 0);
  CHECK_THROWS_AS(color_order(Hue4::uncolored, Hue4::red), std::domain_error);
}

TEST_CASE("color_order is a total order") {
  for (auto a : kProper)
    for (auto b : kProper) {
      auto ab = color_order(a, b);
      auto ba = color_order(b, a);
      CHECK((ab < 0) == (ba > 0));
      CHECK((ab == 0) == (a == b));
      for (auto c : kProper)
        if (ab <= 0 && color_order(b, c) <= 0) CHECK(color_order(a, c) <= 0);
    }
}

TEST_CASE("size_to_color") {
  CHECK(size_to_color(5) == Hue4::red);
  CHECK(size_to_color(6) == Hue4::orange);
  CHECK(size_to_color(7) == Hue4::yellow);
  CHECK(size_to_color(8) == Hue4::green);
  CHECK(size_to_color(12) == Hue4::green);
  CHECK_THROWS_AS(size_to_color(4), std::domain_error);
  for (std::size_t m = 5; m < 20; ++m)
    for (std::size_t n = m; n < 20; ++n) CHECK(color_order(size_to_color(m), size_to_color(n)) <= 0);
}

TEST_CASE("regularity witnesses") {
  CHECK(packet_color(Regularity3::Y) == Hue3::yellow);
  CHECK(admits_next(Regularity3::G, Hue3::red));
  CHECK_FALSE(admits_next(Regularity3::G, Hue3::yellow));
  CHECK_FALSE(admits_next(Regularity3::R, Hue3::red));
  CHECK(admits_next(Regularity3::Y, Hue3::green));
  CHECK(admits_next(Regularity4::G, Hue4::red));
  CHECK_FALSE(admits_next(Regularity4::R, Hue4::red));
  CHECK(packet_color(Regularity4::R) == Hue4::red);
}
