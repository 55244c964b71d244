#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace garagemap {

// Scanned-map raster. Pixels are row-major, `channels` interleaved values each.
struct RasterGrid {
  int width = 0;
  int height = 0;
  int channels = 1; // 1 = gray, 3 = RGB
  std::vector<std::uint8_t> pixels;

  RasterGrid() = default;
  RasterGrid(int w, int h, int ch, std::uint8_t fill = 0);

  std::uint8_t at(int row, int col, int channel = 0) const {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + channel];
  }
  std::uint8_t& at(int row, int col, int channel = 0) {
    return pixels[(static_cast<std::size_t>(row) * width + col) * channels + channel];
  }

  bool operator==(const RasterGrid&) const = default;
};

// Binary occupancy: 0 = free (pathway), 1 = occupied.
struct BitGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BitGrid() = default;
  BitGrid(int w, int h, std::uint8_t fill = 0);

  bool in_bounds(int row, int col) const {
    return row >= 0 && col >= 0 && row < height && col < width;
  }
  std::uint8_t at(int row, int col) const {
    return bits[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) {
    return bits[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t count_occupied() const;

  bool operator==(const BitGrid&) const = default;
};

enum class ImageFormat { PGM, PPM };

// Parses a Netpbm P2/P5 (PGM) or P3/P6 (PPM) image with maxval 255.
// Throws FormatError naming the byte offset of the first problem.
RasterGrid load_image(std::span<const std::uint8_t> bytes, ImageFormat format);
// Same, with the format taken from the magic number.
RasterGrid load_image(std::span<const std::uint8_t> bytes);

// Binary writers: P5 for gray, P6 for RGB.
std::vector<std::uint8_t> encode_pgm(const RasterGrid& img);
std::vector<std::uint8_t> encode_ppm(const RasterGrid& img);
// Picks P5 or P6 from the channel count.
std::vector<std::uint8_t> encode_netpbm(const RasterGrid& img);

// Rec.601 luma, rounded half up. Gray input is returned unchanged.
RasterGrid to_grayscale(const RasterGrid& img, unsigned threads = 1);

// bit = 1 where pixel < threshold. RGB input is converted to gray first.
BitGrid binarize(const RasterGrid& img, std::uint8_t threshold, unsigned threads = 1);

RasterGrid resize_nearest(const RasterGrid& img, int new_width, int new_height);

// Occupied -> 0 (black), free -> 255 (white).
RasterGrid bitgrid_to_image(const BitGrid& grid);

// Text matrix: one line per row of '0'/'1' characters, LF terminated.
std::string encode_bits_text(const BitGrid& grid);
BitGrid parse_bits_text(std::string_view text);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);
void write_file_text(const std::string& path, std::string_view text);

} // namespace garagemap
