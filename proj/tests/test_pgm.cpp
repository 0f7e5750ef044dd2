#include <string>

#include "doctest.h"
#include "jpegrdh/error.hpp"
#include "jpegrdh/pgm.hpp"

using namespace jpegrdh;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("PGM round trip with comments in the header") {
  auto data = bytes_of("P5\n# made by hand\n3 2\n# max\n255\n");
  for (std::uint8_t v : {1, 2, 3, 250, 251, 252}) data.push_back(v);
  const PixelPlane p = parse_pgm(data);
  CHECK(p.width == 3);
  CHECK(p.height == 2);
  CHECK(p.at(2, 1) == 252);
  CHECK(parse_pgm(format_pgm(p)) == p);
}

TEST_CASE("PGM rejects other formats and short rasters") {
  auto code = [](const std::string& s) {
    try {
      parse_pgm(bytes_of(s));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code("P2\n1 1\n255\n0") == ErrorCode::UnsupportedFormat);
  CHECK(code("P5\n1 1\n65535\n00") == ErrorCode::UnsupportedFormat);
  CHECK(code("P5\n4 4\n255\nabc") == ErrorCode::TruncatedStream);
}

TEST_CASE("missing files are Io errors") {
  try {
    read_pgm("/nonexistent/never.pgm");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}
