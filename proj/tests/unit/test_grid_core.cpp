#include <doctest.h>

#include <cmath>

#include "garagemap/error.hpp"
#include "garagemap/grid_core.hpp"
#include "test_util.hpp"

using namespace garagemap;
using test_util::bytes;

TEST_CASE("load_image parses ASCII PGM and PPM") {
  const auto pgm = load_image(bytes("P2 2 1 255 0 255"), ImageFormat::PGM);
  CHECK(pgm.width == 2);
  CHECK(pgm.height == 1);
  CHECK(pgm.channels == 1);
  CHECK(pgm.pixels == std::vector<std::uint8_t>{0, 255});

  const auto ppm = load_image(bytes("P3 1 1 255 10 20 30"), ImageFormat::PPM);
  CHECK(ppm.channels == 3);
  CHECK(ppm.pixels == std::vector<std::uint8_t>{10, 20, 30});
}

TEST_CASE("load_image handles comments and binary payloads") {
  std::string p5 = "P5\n# a comment\n3 2 # trailing\n255\n";
  p5 += std::string("\x00\x01\x02\xfd\xfe\xff", 6);
  const auto img = load_image(bytes(p5));
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.at(1, 2) == 255);
  CHECK(img.at(0, 1) == 1);

  std::string p6 = "P6 1 2 255\n";
  p6 += std::string("\x01\x02\x03\x04\x05\x06", 6);
  const auto rgb = load_image(bytes(p6));
  CHECK(rgb.at(1, 0, 2) == 6);
}

TEST_CASE("load_image reports the byte offset of errors") {
  SUBCASE("truncated ASCII data names the missing pixel") {
    const std::string s = "P2 2 2 255 1 2 3";
    try {
      load_image(bytes(s), ImageFormat::PGM);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() == s.size());
    }
  }
  SUBCASE("truncated binary data") {
    const std::string s = std::string("P5 2 2 255\n") + "abc";
    try {
      load_image(bytes(s));
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() == s.size());
    }
  }
  SUBCASE("maxval other than 255") {
    try {
      load_image(bytes("P2 1 1 15 3"), ImageFormat::PGM);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() == 7);
    }
  }
  SUBCASE("bad magic and wrong format") {
    CHECK_THROWS_AS(load_image(bytes("Q2 1 1 255 0")), FormatError);
    CHECK_THROWS_AS(load_image(bytes("P3 1 1 255 0 0 0"), ImageFormat::PGM), FormatError);
    CHECK_THROWS_AS(load_image(bytes("P2 x 1 255 0"), ImageFormat::PGM), FormatError);
    CHECK_THROWS_AS(load_image(bytes("P2 1 1 255 300"), ImageFormat::PGM), FormatError);
  }
}

TEST_CASE("binary encode and load round trip byte-for-byte") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> v(0, 255);
  for (int ch : {1, 3}) {
    RasterGrid img(5, 4, ch);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(v(rng));
    const auto enc = encode_netpbm(img);
    CHECK(load_image(enc) == img);
    CHECK(encode_netpbm(load_image(enc)) == enc);
  }
}

TEST_CASE("to_grayscale follows Rec.601 with half-up rounding") {
  auto gray_of = [](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RasterGrid img(1, 1, 3);
    img.pixels = {r, g, b};
    return to_grayscale(img).at(0, 0);
  };
  CHECK(gray_of(255, 255, 255) == 255);
  CHECK(gray_of(0, 0, 0) == 0);
  CHECK(gray_of(255, 0, 0) == 76);

  // Oracle: exact decimal weights, rounded half up in long double.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> v(0, 255);
  RasterGrid img(200, 100, 3);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(v(rng));
  const auto g1 = to_grayscale(img, 1);
  const auto g4 = to_grayscale(img, 4);
  CHECK(g1 == g4);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      const long double exact = 0.299L * img.at(r, c, 0) + 0.587L * img.at(r, c, 1) + 0.114L * img.at(r, c, 2);
      const auto expected = static_cast<int>(std::floor(exact + 0.5L + 1e-12L));
      REQUIRE(g1.at(r, c) == expected);
    }

  RasterGrid already(2, 2, 1, 9);
  CHECK(to_grayscale(already) == already);
}

TEST_CASE("to_grayscale is monotone in each channel") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(0, 255);
  std::uniform_int_distribution<int> pick(0, 2);
  for (int i = 0; i < 5000; ++i) {
    RasterGrid a(1, 1, 3);
    for (auto& p : a.pixels) p = static_cast<std::uint8_t>(v(rng));
    RasterGrid b = a;
    const int ch = pick(rng);
    b.pixels[ch] = static_cast<std::uint8_t>(std::max<int>(b.pixels[ch], v(rng)));
    REQUIRE(to_grayscale(b).at(0, 0) >= to_grayscale(a).at(0, 0));
  }
}

TEST_CASE("binarize marks dark pixels with a strict threshold") {
  RasterGrid img(3, 1, 1);
  img.pixels = {0, 255, 128};
  const auto bits = binarize(img, 128);
  CHECK(bits.bits == std::vector<std::uint8_t>{1, 0, 0});

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> v(0, 255);
  RasterGrid big(64, 48, 1);
  for (auto& p : big.pixels) p = static_cast<std::uint8_t>(v(rng));
  std::size_t previous = 0;
  for (int t = 0; t <= 255; ++t) {
    const auto b = binarize(big, static_cast<std::uint8_t>(t), 3);
    for (auto x : b.bits) REQUIRE((x == 0 || x == 1));
    REQUIRE(b.count_occupied() >= previous);
    previous = b.count_occupied();
  }
}

TEST_CASE("resize_nearest") {
  RasterGrid one(1, 1, 1, 7);
  CHECK(resize_nearest(one, 2, 2).pixels == std::vector<std::uint8_t>(4, 7));

  RasterGrid two(2, 2, 1);
  two.pixels = {1, 2, 3, 4};
  CHECK(resize_nearest(two, 1, 1).pixels == std::vector<std::uint8_t>{1});
  CHECK(resize_nearest(two, 2, 2) == two);

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> v(0, 255);
  RasterGrid rgb(5, 3, 3);
  for (auto& p : rgb.pixels) p = static_cast<std::uint8_t>(v(rng));
  for (int k : {1, 2, 3}) {
    const auto up = resize_nearest(rgb, 5 * k, 3 * (k + 1));
    CHECK(resize_nearest(up, 5, 3) == rgb);
  }
}

TEST_CASE("bit grid text and image helpers") {
  std::mt19937_64 rng(1);
  const auto g = test_util::random_grid(rng, 7, 5);
  const auto text = encode_bits_text(g);
  CHECK(parse_bits_text(text) == g);
  CHECK(text.substr(0, 7).find_first_not_of("01") == std::string::npos);

  const auto img = bitgrid_to_image(g);
  CHECK(binarize(img, 128) == g);

  CHECK_THROWS_AS(parse_bits_text("010\n01\n"), FormatError);
  CHECK_THROWS_AS(parse_bits_text("012\n"), FormatError);
}
