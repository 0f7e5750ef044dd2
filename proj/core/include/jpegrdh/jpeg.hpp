#pragma once

// Baseline sequential JPEG (SOF0, Huffman) at the quantized-coefficient level.
//
// parse_jpeg() entropy-decodes a bitstream into quantized DCT coefficients
// without dequantizing; serialize_jpeg() writes them back. Nothing in between
// touches pixels, so a parse/serialize cycle is lossless on coefficients.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace jpegrdh {

using Coeff = std::int16_t;

inline constexpr int kBlockSize = 64;
inline constexpr int kMaxAcMagnitude = 1023;
inline constexpr int kMaxDcMagnitude = 2047;

/// Zigzag index -> natural (row-major) index inside an 8x8 block.
inline constexpr std::array<std::uint8_t, kBlockSize> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

/// One 8x8 block of quantized coefficients in zigzag order; [0] is DC.
struct CoeffBlock {
  std::array<Coeff, kBlockSize> coeffs{};

  Coeff& operator[](std::size_t k) { return coeffs[k]; }
  Coeff operator[](std::size_t k) const { return coeffs[k]; }
  Coeff dc() const { return coeffs[0]; }

  /// Number of AC positions (1..63) holding zero.
  int zero_ac_count() const;

  friend bool operator==(const CoeffBlock&, const CoeffBlock&) = default;
};

/// Quantization divisors in zigzag order. `sixteen_bit` records the Pq flag
/// of the DQT segment so it can be written back unchanged.
struct QuantTable {
  std::array<std::uint16_t, kBlockSize> values{};
  bool sixteen_bit = false;

  friend bool operator==(const QuantTable&, const QuantTable&) = default;
};

/// Huffman table in DHT form: code counts per length 1..16, then symbols
/// ordered by code length.
struct HuffmanTable {
  std::array<std::uint8_t, 16> counts{};
  std::vector<std::uint8_t> symbols;

  friend bool operator==(const HuffmanTable&, const HuffmanTable&) = default;
};

struct ComponentInfo {
  std::uint8_t id = 1;
  std::uint8_t h_samp = 1;
  std::uint8_t v_samp = 1;
  std::uint8_t quant_id = 0;
  // Huffman table selectors used when the component is scanned.
  std::uint8_t dc_table = 0;
  std::uint8_t ac_table = 0;

  friend bool operator==(const ComponentInfo&, const ComponentInfo&) = default;
};

struct FrameInfo {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t precision = 8;
  std::vector<ComponentInfo> components;

  int max_h_samp() const;
  int max_v_samp() const;
  /// Sample dimensions of component `c` after subsampling.
  int component_width(std::size_t c) const;
  int component_height(std::size_t c) const;
  /// MCU grid of an interleaved scan.
  int mcus_wide() const;
  int mcus_high() const;

  friend bool operator==(const FrameInfo&, const FrameInfo&) = default;
};

/// Block grid of one component. For single-component frames the grid is
/// ceil(w/8) x ceil(h/8); otherwise it is padded to whole MCUs, matching the
/// blocks an interleaved scan carries.
struct CoeffPlane {
  int blocks_wide = 0;
  int blocks_high = 0;
  std::vector<CoeffBlock> blocks;

  CoeffPlane() = default;
  CoeffPlane(int wide, int high)
      : blocks_wide(wide),
        blocks_high(high),
        blocks(static_cast<std::size_t>(wide) * static_cast<std::size_t>(high)) {}

  CoeffBlock& at(int bx, int by) {
    return blocks[static_cast<std::size_t>(by) * blocks_wide + bx];
  }
  const CoeffBlock& at(int bx, int by) const {
    return blocks[static_cast<std::size_t>(by) * blocks_wide + bx];
  }

  friend bool operator==(const CoeffPlane&, const CoeffPlane&) = default;
};

/// An APPn or COM segment, kept verbatim. `marker` is the second marker byte.
struct Segment {
  std::uint8_t marker = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct JpegImage {
  FrameInfo frame;
  std::array<std::optional<QuantTable>, 4> quant_tables;
  std::array<std::optional<HuffmanTable>, 4> dc_tables;
  std::array<std::optional<HuffmanTable>, 4> ac_tables;
  std::uint16_t restart_interval = 0;
  /// One plane per frame component, in frame order.
  std::vector<CoeffPlane> coefficients;
  std::vector<Segment> app_segments;

  friend bool operator==(const JpegImage&, const JpegImage&) = default;
};

/// 8-bit samples, row-major.
struct PixelPlane {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> samples;

  PixelPlane() = default;
  PixelPlane(int w, int h, std::uint8_t fill = 0)
      : width(w),
        height(h),
        samples(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint8_t& at(int x, int y) {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const PixelPlane&, const PixelPlane&) = default;
};

enum class TablePolicy {
  /// Reuse the Huffman tables stored in the image.
  PreserveOriginal,
  /// Gather symbol statistics and emit optimal tables (two-pass).
  RebuildOptimal,
};

/// Throws Error{UnsupportedFormat | TruncatedStream | InvalidHuffmanCode |
/// MarkerSyntaxError}, each carrying the byte offset.
JpegImage parse_jpeg(std::span<const std::uint8_t> bytes);

/// Throws Error{CategoryOverflow} for out-of-range coefficients and, under
/// PreserveOriginal, Error{MissingCode} when a symbol has no code.
std::vector<std::uint8_t> serialize_jpeg(
    const JpegImage& image, TablePolicy policy = TablePolicy::RebuildOptimal);

/// Dequantize + float IDCT + level shift, one plane per component at its
/// own (subsampled) resolution.
std::vector<PixelPlane> decode_to_pixels(const JpegImage& image);

/// First component only (luminance, or the only plane of a grayscale image).
PixelPlane decode_luminance(const JpegImage& image);

/// Grayscale baseline encoder used to build test corpora. Annex K
/// luminance tables scaled with the IJG quality formula; standard Huffman
/// tables; a JFIF APP0 header.
JpegImage encode_from_pixels(const PixelPlane& plane, int quality);

/// IJG quality scaling of a base table (zigzag order in, zigzag order out).
std::array<std::uint16_t, kBlockSize> scale_quant_table(
    const std::array<std::uint16_t, kBlockSize>& base, int quality);

/// Annex K.1 luminance quantization table, zigzag order.
extern const std::array<std::uint16_t, kBlockSize> kAnnexKLuminance;

/// Annex K.3 standard luminance DC/AC Huffman tables.
HuffmanTable standard_luminance_dc_table();
HuffmanTable standard_luminance_ac_table();

/// Number of bits needed for |value| (JPEG size category).
int size_category(int value) noexcept;

}  // namespace jpegrdh
