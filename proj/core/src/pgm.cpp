#include "jpegrdh/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "jpegrdh/error.hpp"

namespace jpegrdh {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int number() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000) {
        throw Error(ErrorCode::UnsupportedFormat, "PGM header value too large",
                    start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw Error(ErrorCode::UnsupportedFormat, "expected a number in PGM header",
                  start);
    }
    return static_cast<int>(v);
  }

  /// Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::UnsupportedFormat, "PGM header not terminated",
                  pos_);
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

PixelPlane parse_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::UnsupportedFormat, "not a binary PGM (P5)", 0);
  }
  HeaderReader header(bytes);
  const int width = header.number();
  const int height = header.number();
  const int maxval = header.number();
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedFormat,
                "PGM maxval " + std::to_string(maxval) + " (only 255 supported)");
  }
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::UnsupportedFormat, "empty PGM");
  }
  const std::size_t start = header.raster_start();
  const std::size_t count =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < start + count) {
    throw Error(ErrorCode::TruncatedStream, "PGM raster cut off", bytes.size());
  }
  PixelPlane plane(width, height);
  std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(start), count,
              plane.samples.begin());
  return plane;
}

std::vector<std::uint8_t> format_pgm(const PixelPlane& plane) {
  const std::string header = "P5\n" + std::to_string(plane.width) + " " +
                             std::to_string(plane.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), plane.samples.begin(), plane.samples.end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::Io, "read failed: " + path.string());
  }
  return data;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "write failed: " + path.string());
  }
}

}  // namespace jpegrdh
