#include "garagemap/grid_core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "garagemap/error.hpp"
#include "garagemap/parallel.hpp"

namespace garagemap {

RasterGrid::RasterGrid(int w, int h, int ch, std::uint8_t fill)
    : width(w), height(h), channels(ch),
      pixels(static_cast<std::size_t>(w) * h * ch, fill) {
  if (w < 1 || h < 1) throw Error("raster dimensions must be at least 1x1");
  if (ch != 1 && ch != 3) throw Error("raster must have 1 or 3 channels");
}

BitGrid::BitGrid(int w, int h, std::uint8_t fill)
    : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill) {
  if (w < 1 || h < 1) throw Error("bit grid dimensions must be at least 1x1");
}

std::size_t BitGrid::count_occupied() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

namespace {

class NetpbmReader {
public:
  explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads an unsigned decimal token, skipping leading whitespace and comments.
  long read_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    if (at_end()) throw FormatError(std::string("unexpected end of data reading ") + what, pos_);
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw FormatError(std::string(what) + " out of range", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("expected a number for ") + what, start);
    if (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#')
      throw FormatError(std::string("malformed number for ") + what, pos_);
    return value;
  }

  std::uint8_t byte() { return bytes_[pos_++]; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

} // namespace

RasterGrid load_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P')
    throw FormatError("missing Netpbm magic number", 0);
  switch (bytes[1]) {
    case '2':
    case '5':
      return load_image(bytes, ImageFormat::PGM);
    case '3':
    case '6':
      return load_image(bytes, ImageFormat::PPM);
    default:
      throw FormatError("unsupported Netpbm magic number", 1);
  }
}

RasterGrid load_image(std::span<const std::uint8_t> bytes, ImageFormat format) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError("missing Netpbm magic number", 0);
  bool ascii = false;
  if (format == ImageFormat::PGM && (bytes[1] == '2' || bytes[1] == '5')) {
    ascii = bytes[1] == '2';
  } else if (format == ImageFormat::PPM && (bytes[1] == '3' || bytes[1] == '6')) {
    ascii = bytes[1] == '3';
  } else {
    throw FormatError("magic number does not match the requested format", 1);
  }
  const int channels = format == ImageFormat::PGM ? 1 : 3;

  NetpbmReader in(bytes.subspan(0));
  in.byte();
  in.byte();
  if (!in.at_end() && !std::isspace(bytes[2]) && bytes[2] != '#')
    throw FormatError("malformed magic number", 2);

  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  if (width < 1 || height < 1) throw FormatError("image dimensions must be positive", in.pos());
  const std::size_t maxval_at = (in.skip_space_and_comments(), in.pos());
  const long maxval = in.read_uint("maxval");
  if (maxval != 255) throw FormatError("maxval must be 255", maxval_at);

  RasterGrid img(static_cast<int>(width), static_cast<int>(height), channels);
  const std::size_t count = img.pixels.size();

  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      in.skip_space_and_comments();
      if (in.at_end())
        throw FormatError("truncated pixel data: missing sample " + std::to_string(i), in.pos());
      const std::size_t at = in.pos();
      const long v = in.read_uint("sample");
      if (v > 255) throw FormatError("sample exceeds maxval", at);
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  } else {
    // Exactly one whitespace byte separates maxval from the raster.
    if (in.at_end()) throw FormatError("truncated pixel data: missing sample 0", in.pos());
    if (!std::isspace(in.byte())) throw FormatError("expected whitespace after maxval", in.pos() - 1);
    if (in.remaining() < count) {
      throw FormatError("truncated pixel data: missing sample " + std::to_string(in.remaining()),
                        bytes.size());
    }
    for (std::size_t i = 0; i < count; ++i) img.pixels[i] = in.byte();
  }
  return img;
}

namespace {

std::vector<std::uint8_t> encode_binary(const RasterGrid& img, char magic) {
  const std::string header = std::string("P") + magic + "\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

} // namespace

std::vector<std::uint8_t> encode_pgm(const RasterGrid& img) {
  if (img.channels != 1) throw Error("PGM output requires a gray raster");
  return encode_binary(img, '5');
}

std::vector<std::uint8_t> encode_ppm(const RasterGrid& img) {
  if (img.channels != 3) throw Error("PPM output requires an RGB raster");
  return encode_binary(img, '6');
}

std::vector<std::uint8_t> encode_netpbm(const RasterGrid& img) {
  return img.channels == 1 ? encode_pgm(img) : encode_ppm(img);
}

RasterGrid to_grayscale(const RasterGrid& img, unsigned threads) {
  if (img.channels == 1) return img;
  RasterGrid out(img.width, img.height, 1);
  parallel_for(static_cast<std::size_t>(img.height), threads, [&](std::size_t row) {
    for (int col = 0; col < img.width; ++col) {
      const int r = img.at(static_cast<int>(row), col, 0);
      const int g = img.at(static_cast<int>(row), col, 1);
      const int b = img.at(static_cast<int>(row), col, 2);
      // Integer weights in thousandths keep the half-up rounding exact.
      const int gray = (299 * r + 587 * g + 114 * b + 500) / 1000;
      out.at(static_cast<int>(row), col) = static_cast<std::uint8_t>(std::clamp(gray, 0, 255));
    }
  });
  return out;
}

BitGrid binarize(const RasterGrid& img, std::uint8_t threshold, unsigned threads) {
  const RasterGrid gray = img.channels == 1 ? RasterGrid{} : to_grayscale(img, threads);
  const RasterGrid& src = img.channels == 1 ? img : gray;
  BitGrid out(src.width, src.height);
  parallel_for(static_cast<std::size_t>(src.height), threads, [&](std::size_t row) {
    for (int col = 0; col < src.width; ++col) {
      out.at(static_cast<int>(row), col) = src.at(static_cast<int>(row), col) < threshold ? 1 : 0;
    }
  });
  return out;
}

RasterGrid resize_nearest(const RasterGrid& img, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) throw Error("resize target must be at least 1x1");
  RasterGrid out(new_width, new_height, img.channels);
  for (int row = 0; row < new_height; ++row) {
    const int src_row = static_cast<int>(static_cast<long long>(row) * img.height / new_height);
    for (int col = 0; col < new_width; ++col) {
      const int src_col = static_cast<int>(static_cast<long long>(col) * img.width / new_width);
      for (int ch = 0; ch < img.channels; ++ch) out.at(row, col, ch) = img.at(src_row, src_col, ch);
    }
  }
  return out;
}

RasterGrid bitgrid_to_image(const BitGrid& grid) {
  RasterGrid out(grid.width, grid.height, 1);
  for (std::size_t i = 0; i < grid.bits.size(); ++i) out.pixels[i] = grid.bits[i] ? 0 : 255;
  return out;
}

std::string encode_bits_text(const BitGrid& grid) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.width + 1) * grid.height);
  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) out.push_back(grid.at(row, col) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

BitGrid parse_bits_text(std::string_view text) {
  std::vector<std::string_view> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) rows.push_back(line);
    start = end + 1;
  }
  if (rows.empty()) throw FormatError("bit matrix is empty", 0);
  const std::size_t width = rows.front().size();
  BitGrid grid(static_cast<int>(width), static_cast<int>(rows.size()));
  std::size_t offset = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    offset = static_cast<std::size_t>(rows[r].data() - text.data());
    if (rows[r].size() != width) throw FormatError("ragged bit matrix row " + std::to_string(r), offset);
    for (std::size_t c = 0; c < width; ++c) {
      const char ch = rows[r][c];
      if (ch != '0' && ch != '1') throw FormatError("bit matrix holds a non 0/1 character", offset + c);
      grid.at(static_cast<int>(r), static_cast<int>(c)) = ch == '1' ? 1 : 0;
    }
  }
  return grid;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path);
}

void write_file_text(const std::string& path, std::string_view text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

} // namespace garagemap
