#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "jpegrdh/error.hpp"
#include "jpegrdh/jpeg.hpp"
#include "jpegrdh/pgm.hpp"
#include "support/test_support.hpp"

using namespace jpegrdh;
namespace ts = testing_support;

namespace {

ErrorCode parse_error(const std::vector<std::uint8_t>& bytes) {
  try {
    parse_jpeg(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse unexpectedly succeeded");
  return ErrorCode::Io;
}

std::vector<std::uint8_t> synthetic_rgb(int w, int h, std::uint64_t seed) {
  const auto r = ts::synthetic_plane(w, h, seed);
  const auto g = ts::synthetic_plane(w, h, seed + 1);
  const auto b = ts::synthetic_plane(w, h, seed + 2);
  std::vector<std::uint8_t> rgb;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    rgb.push_back(r.samples[i]);
    rgb.push_back(g.samples[i]);
    rgb.push_back(b.samples[i]);
  }
  return rgb;
}

/// Our planes against libjpeg's coefficient read (which is natural order).
void check_matches_libjpeg(const JpegImage& img,
                           const std::vector<std::uint8_t>& bytes) {
  const auto ref = refjpeg::read_coefficients(bytes);
  REQUIRE(ref.size() == img.coefficients.size());
  for (std::size_t c = 0; c < ref.size(); ++c) {
    const auto& plane = img.coefficients[c];
    REQUIRE(plane.blocks_wide >= ref[c].blocks_wide);
    REQUIRE(plane.blocks_high >= ref[c].blocks_high);
    for (int by = 0; by < ref[c].blocks_high; ++by) {
      for (int bx = 0; bx < ref[c].blocks_wide; ++bx) {
        const auto& theirs =
            ref[c].blocks[static_cast<std::size_t>(by * ref[c].blocks_wide + bx)];
        const auto& ours = plane.at(bx, by);
        for (int k = 0; k < 64; ++k) {
          REQUIRE(ours[k] == theirs[kZigzagToNatural[k]]);
        }
      }
    }
  }
}

/// The libjpeg-produced variants the parser must handle.
std::vector<std::vector<std::uint8_t>> foreign_files() {
  std::vector<std::vector<std::uint8_t>> files;
  const auto gray = ts::to_ref(ts::synthetic_plane(75, 41, 5));
  files.push_back(refjpeg::encode_gray(gray, {.quality = 50}));
  files.push_back(refjpeg::encode_gray(gray, {.quality = 90, .optimize = true}));
  files.push_back(refjpeg::encode_gray(gray, {.quality = 70, .restart_interval = 3}));
  const auto rgb = synthetic_rgb(53, 37, 9);
  files.push_back(refjpeg::encode_rgb(53, 37, rgb, {.quality = 75}));
  files.push_back(refjpeg::encode_rgb(53, 37, rgb, {.quality = 85, .h_samp = 2, .v_samp = 2}));
  files.push_back(refjpeg::encode_rgb(53, 37, rgb,
                                      {.quality = 60, .restart_interval = 2,
                                       .h_samp = 2, .v_samp = 1}));
  return files;
}

}  // namespace

TEST_CASE("512x512 grayscale cover has a 64x64 block grid") {
  const auto plane = read_pgm(ts::corpus_dir() / "camera.pgm");
  REQUIRE(plane.width == 512);
  const auto bytes = serialize_jpeg(encode_from_pixels(plane, 50));
  const auto img = parse_jpeg(bytes);
  REQUIRE(img.coefficients.size() == 1);
  CHECK(img.coefficients[0].blocks_wide == 64);
  CHECK(img.coefficients[0].blocks_high == 64);
  CHECK(img.frame.width == 512);
  CHECK(img.frame.height == 512);
}

TEST_CASE("parser agrees with libjpeg on foreign baseline files") {
  for (const auto& bytes : foreign_files()) {
    const auto img = parse_jpeg(bytes);
    check_matches_libjpeg(img, bytes);
  }
}

TEST_CASE("parse/serialize/parse is the identity for both table policies") {
  for (const auto& bytes : foreign_files()) {
    const auto img = parse_jpeg(bytes);
    for (TablePolicy policy :
         {TablePolicy::PreserveOriginal, TablePolicy::RebuildOptimal}) {
      const auto out = serialize_jpeg(img, policy);
      const auto again = parse_jpeg(out);
      CHECK(again.coefficients == img.coefficients);
      CHECK(again.quant_tables == img.quant_tables);
      CHECK(again.frame == img.frame);
      CHECK(again.restart_interval == img.restart_interval);
      CHECK(again.app_segments == img.app_segments);
      // libjpeg must read what we wrote.
      check_matches_libjpeg(again, out);
    }
  }
}

TEST_CASE("canonical form is a serialize/parse fixpoint") {
  for (const auto& bytes : foreign_files()) {
    const auto canonical = serialize_jpeg(parse_jpeg(bytes), TablePolicy::RebuildOptimal);
    CHECK(serialize_jpeg(parse_jpeg(canonical), TablePolicy::PreserveOriginal) ==
          canonical);
    const auto preserved = serialize_jpeg(parse_jpeg(bytes), TablePolicy::PreserveOriginal);
    CHECK(serialize_jpeg(parse_jpeg(preserved), TablePolicy::PreserveOriginal) ==
          preserved);
  }
}

TEST_CASE("optimal tables never cost more than the originals") {
  for (const auto& bytes : foreign_files()) {
    const auto img = parse_jpeg(bytes);
    CHECK(serialize_jpeg(img, TablePolicy::RebuildOptimal).size() <=
          serialize_jpeg(img, TablePolicy::PreserveOriginal).size());
  }
}

TEST_CASE("unsupported encodings are rejected") {
  const auto gray = ts::to_ref(ts::synthetic_plane(32, 32, 1));
  CHECK(parse_error(refjpeg::encode_gray(gray, {.progressive = true})) ==
        ErrorCode::UnsupportedFormat);
  CHECK(parse_error(refjpeg::encode_gray(gray, {.arithmetic = true})) ==
        ErrorCode::UnsupportedFormat);

  const auto baseline = refjpeg::encode_gray(gray, {.quality = 75});
  std::size_t at = 0;
  while (at + 1 < baseline.size() &&
         !(baseline[at] == 0xFF && baseline[at + 1] == 0xC0)) {
    ++at;
  }
  REQUIRE(at + 1 < baseline.size());

  auto lossless = baseline;
  lossless[at + 1] = 0xC3;
  CHECK(parse_error(lossless) == ErrorCode::UnsupportedFormat);

  auto twelve_bit = baseline;
  twelve_bit[at + 4] = 12;
  try {
    parse_jpeg(twelve_bit);
    FAIL("12-bit accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFormat);
    CHECK(e.offset() == at + 4);  // the precision byte
  }
}

TEST_CASE("malformed streams produce located errors") {
  const auto bytes = serialize_jpeg(
      encode_from_pixels(ts::synthetic_plane(64, 64, 2), 75));

  CHECK(parse_error({0x00, 0x01}) == ErrorCode::MarkerSyntaxError);

  // Cut inside the entropy-coded segment.
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes.size() - 40));
  try {
    parse_jpeg(cut);
    FAIL("truncated stream accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncatedStream);
    REQUIRE(e.offset().has_value());
    CHECK(*e.offset() <= cut.size());
  }

  // Cut in the headers.
  std::vector<std::uint8_t> header_cut(bytes.begin(), bytes.begin() + 30);
  CHECK(parse_error(header_cut) == ErrorCode::TruncatedStream);

  // Missing EOI.
  std::vector<std::uint8_t> no_eoi(bytes.begin(), bytes.end() - 2);
  CHECK(parse_error(no_eoi) == ErrorCode::TruncatedStream);
}

TEST_CASE("garbage in the scan never crashes the parser") {
  const auto bytes = serialize_jpeg(
      encode_from_pixels(ts::synthetic_plane(48, 40, 3), 60));
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    auto mutated = bytes;
    const int flips = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < flips; ++i) {
      mutated[rng() % mutated.size()] = static_cast<std::uint8_t>(rng());
    }
    try {
      const auto img = parse_jpeg(mutated);
      CHECK(img.coefficients.size() == 1);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("AC magnitude 1024 is CategoryOverflow") {
  auto img = encode_from_pixels(ts::synthetic_plane(16, 16, 4), 50);
  img.coefficients[0].blocks[1][7] = 1023;
  CHECK_NOTHROW(serialize_jpeg(img));
  img.coefficients[0].blocks[1][7] = 1024;
  try {
    serialize_jpeg(img);
    FAIL("expected CategoryOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CategoryOverflow);
  }
  img.coefficients[0].blocks[1][7] = -1024;
  CHECK_THROWS_AS(serialize_jpeg(img, TablePolicy::PreserveOriginal), Error);
}

TEST_CASE("PreserveOriginal reports a symbol with no code") {
  JpegImage img = encode_from_pixels(PixelPlane(16, 8, 128), 50);
  img.coefficients[0].blocks[0][1] = 1;
  const auto narrow = parse_jpeg(serialize_jpeg(img, TablePolicy::RebuildOptimal));
  JpegImage grown = narrow;
  grown.coefficients[0].blocks[0][1] = 5;
  try {
    serialize_jpeg(grown, TablePolicy::PreserveOriginal);
    FAIL("expected MissingCode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingCode);
  }
  CHECK_NOTHROW(serialize_jpeg(grown, TablePolicy::RebuildOptimal));
}

TEST_CASE("restart intervals and extra segments survive a round trip") {
  auto img = encode_from_pixels(ts::synthetic_plane(72, 24, 6), 80);
  img.restart_interval = 4;
  img.app_segments.push_back(Segment{0xFE, {'h', 'i'}});
  img.app_segments.push_back(Segment{0xE1, {1, 2, 3}});
  const auto bytes = serialize_jpeg(img, TablePolicy::PreserveOriginal);
  const auto back = parse_jpeg(bytes);
  CHECK(back == img);
  check_matches_libjpeg(back, bytes);
}

TEST_CASE("decode: constant blocks have closed forms") {
  JpegImage img = encode_from_pixels(PixelPlane(8, 8, 0), 50);
  QuantTable ones;
  ones.values.fill(1);
  img.quant_tables[0] = ones;
  img.coefficients[0].blocks[0] = CoeffBlock{};
  auto plane = decode_luminance(img);
  CHECK(std::all_of(plane.samples.begin(), plane.samples.end(),
                    [](auto v) { return v == 128; }));
  // DC basis is 1/8 per sample under the orthonormal scaling: 8 -> +1.
  img.coefficients[0].blocks[0][0] = 8;
  plane = decode_luminance(img);
  CHECK(std::all_of(plane.samples.begin(), plane.samples.end(),
                    [](auto v) { return v == 129; }));
}

TEST_CASE("decode: separable IDCT agrees with the direct 2-D sum") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-30, 30);
  std::uniform_int_distribution<int> quant(1, 20);
  for (int trial = 0; trial < 50; ++trial) {
    JpegImage img = encode_from_pixels(PixelPlane(8, 8, 0), 50);
    QuantTable q;
    for (auto& v : q.values) v = static_cast<std::uint16_t>(quant(rng));
    img.quant_tables[0] = q;
    CoeffBlock& b = img.coefficients[0].blocks[0];
    for (int k = 0; k < 64; ++k) b[k] = static_cast<Coeff>(k < 16 ? coef(rng) : 0);
    std::array<double, 64> freq{};
    for (int k = 0; k < 64; ++k) freq[kZigzagToNatural[k]] = double(b[k]) * q.values[k];
    const auto plane = decode_luminance(img);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        const double exact = ts::direct_idct(freq, x, y) + 128.0;
        const double frac = exact - std::floor(exact);
        if (std::abs(frac - 0.5) < 1e-9) continue;  // rounding tie
        const double expect = std::clamp(std::round(exact), 0.0, 255.0);
        REQUIRE(plane.at(x, y) == expect);
      }
    }
  }
}

TEST_CASE("decode agrees with libjpeg within one gray level") {
  std::vector<std::vector<std::uint8_t>> files = foreign_files();
  files.push_back(serialize_jpeg(
      encode_from_pixels(read_pgm(ts::data_dir() / "coins_303x384.pgm"), 70)));
  for (const auto& bytes : files) {
    const auto ours = decode_luminance(parse_jpeg(bytes));
    const auto theirs = refjpeg::decode_luma(bytes);
    REQUIRE(ours.width == theirs.width);
    REQUIRE(ours.height == theirs.height);
    int worst = 0;
    for (std::size_t i = 0; i < ours.samples.size(); ++i) {
      worst = std::max(worst, std::abs(int(ours.samples[i]) - int(theirs.samples[i])));
    }
    CHECK(worst <= 1);
  }
}

TEST_CASE("encoder quantization tables follow the IJG scaling") {
  const auto at50 = encode_from_pixels(PixelPlane(8, 8, 128), 50);
  CHECK(at50.quant_tables[0]->values == kAnnexKLuminance);
  const auto at100 = encode_from_pixels(PixelPlane(8, 8, 128), 100);
  for (auto v : at100.quant_tables[0]->values) CHECK(v == 1);
  // Q=10: scale 500%, so 16 -> 80 and 99 -> 255 (clamped).
  const auto t10 = scale_quant_table(kAnnexKLuminance, 10);
  CHECK(t10[0] == 80);
  CHECK(t10[63] == 255);
  // Q=75: scale 50%, (16*50+50)/100 = 8.
  CHECK(scale_quant_table(kAnnexKLuminance, 75)[0] == 8);
  CHECK_THROWS_AS(encode_from_pixels(PixelPlane(8, 8), 0), Error);
  CHECK_THROWS_AS(encode_from_pixels(PixelPlane(8, 8), 101), Error);
}

TEST_CASE("a uniform image has no AC energy at any quality") {
  for (int q : {1, 25, 50, 75, 100}) {
    for (std::uint8_t level : {std::uint8_t{128}, std::uint8_t{37}}) {
      const auto img = encode_from_pixels(PixelPlane(24, 16, level), q);
      for (const auto& b : img.coefficients[0].blocks) {
        for (int k = 1; k < 64; ++k) CHECK(b[k] == 0);
      }
    }
  }
}

TEST_CASE("encoded covers decode close to their source") {
  const auto src = read_pgm(ts::corpus_dir() / "camera.pgm");
  const auto img = encode_from_pixels(src, 90);
  const auto out = decode_luminance(parse_jpeg(serialize_jpeg(img)));
  double mse = 0;
  for (std::size_t i = 0; i < src.samples.size(); ++i) {
    const double d = double(src.samples[i]) - out.samples[i];
    mse += d * d;
  }
  mse /= double(src.samples.size());
  CHECK(mse < 10.0);  // roughly PSNR > 38 dB at QF 90
}

TEST_CASE("size_category boundaries") {
  CHECK(size_category(0) == 0);
  CHECK(size_category(1) == 1);
  CHECK(size_category(-1) == 1);
  CHECK(size_category(2) == 2);
  CHECK(size_category(1023) == 10);
  CHECK(size_category(-1024) == 11);
  CHECK(size_category(2047) == 11);
}
