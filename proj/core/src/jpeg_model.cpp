#include <algorithm>

#include "jpegrdh/jpeg.hpp"

namespace jpegrdh {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

int CoeffBlock::zero_ac_count() const {
  return static_cast<int>(
      std::count(coeffs.begin() + 1, coeffs.end(), Coeff{0}));
}

int FrameInfo::max_h_samp() const {
  int m = 1;
  for (const auto& c : components) m = std::max<int>(m, c.h_samp);
  return m;
}

int FrameInfo::max_v_samp() const {
  int m = 1;
  for (const auto& c : components) m = std::max<int>(m, c.v_samp);
  return m;
}

int FrameInfo::component_width(std::size_t c) const {
  return ceil_div(width * components[c].h_samp, max_h_samp());
}

int FrameInfo::component_height(std::size_t c) const {
  return ceil_div(height * components[c].v_samp, max_v_samp());
}

int FrameInfo::mcus_wide() const { return ceil_div(width, 8 * max_h_samp()); }

int FrameInfo::mcus_high() const { return ceil_div(height, 8 * max_v_samp()); }

int size_category(int value) noexcept {
  unsigned magnitude = value < 0 ? static_cast<unsigned>(-value)
                                 : static_cast<unsigned>(value);
  int bits = 0;
  while (magnitude != 0) {
    ++bits;
    magnitude >>= 1;
  }
  return bits;
}

const std::array<std::uint16_t, kBlockSize> kAnnexKLuminance = [] {
  // Table K.1 in natural order.
  constexpr std::array<std::uint16_t, kBlockSize> natural = {
      16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
      14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
      18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
      49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
  std::array<std::uint16_t, kBlockSize> zigzag{};
  for (int k = 0; k < kBlockSize; ++k) {
    zigzag[k] = natural[kZigzagToNatural[k]];
  }
  return zigzag;
}();

std::array<std::uint16_t, kBlockSize> scale_quant_table(
    const std::array<std::uint16_t, kBlockSize>& base, int quality) {
  quality = std::clamp(quality, 1, 100);
  const long scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<std::uint16_t, kBlockSize> out{};
  for (int k = 0; k < kBlockSize; ++k) {
    const long v = (base[k] * scale + 50) / 100;
    out[k] = static_cast<std::uint16_t>(std::clamp(v, 1L, 255L));
  }
  return out;
}

HuffmanTable standard_luminance_dc_table() {
  HuffmanTable t;
  t.counts = {0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  t.symbols = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  return t;
}

HuffmanTable standard_luminance_ac_table() {
  HuffmanTable t;
  t.counts = {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d};
  t.symbols = {
      0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06,
      0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08,
      0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72,
      0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
      0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45,
      0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
      0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75,
      0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
      0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3,
      0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6,
      0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9,
      0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
      0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4,
      0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa};
  return t;
}

}  // namespace jpegrdh
