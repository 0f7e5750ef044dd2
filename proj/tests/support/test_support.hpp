#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <vector>

#include "jpegrdh/jpeg.hpp"
#include "jpegrdh/pgm.hpp"
#include "libjpeg_reference.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return JPEGRDH_TEST_DATA_DIR; }
inline std::filesystem::path corpus_dir() { return data_dir() / "corpus"; }

/// Smooth gradient plus seeded noise; exercises every coefficient position
/// without needing files.
inline jpegrdh::PixelPlane synthetic_plane(int w, int h, std::uint64_t seed,
                                           double noise = 12.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, noise);
  jpegrdh::PixelPlane p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = 128.0 + 60.0 * std::sin(x * 0.07 + seed) *
                                   std::cos(y * 0.05) +
                       0.2 * (x - y) + n(rng);
      p.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return p;
}

inline refjpeg::Plane to_ref(const jpegrdh::PixelPlane& p) {
  return {p.width, p.height, p.samples};
}

/// Direct (non-separable) orthonormal 2-D inverse DCT of one sample;
/// `freq` is dequantized, natural order.
inline double direct_idct(const std::array<double, 64>& freq, int x, int y) {
  double s = 0.0;
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      const double cv = v == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
      s += cu * cv * freq[v * 8 + u] *
           std::cos((2 * x + 1) * u * std::numbers::pi / 16) *
           std::cos((2 * y + 1) * v * std::numbers::pi / 16);
    }
  }
  return s / 4.0;
}

/// Nonzero / magnitude-one AC counts taken straight from a libjpeg
/// coefficient read (natural order, index 0 is DC).
struct AcCounts {
  std::size_t nonzero = 0;
  std::size_t unit = 0;
};
inline AcCounts count_acs_with_libjpeg(std::span<const std::uint8_t> jpeg) {
  AcCounts counts;
  for (const auto& comp : refjpeg::read_coefficients(jpeg)) {
    for (const auto& block : comp.blocks) {
      for (int k = 1; k < 64; ++k) {
        if (block[k] != 0) ++counts.nonzero;
        if (block[k] == 1 || block[k] == -1) ++counts.unit;
      }
    }
  }
  return counts;
}

}  // namespace testing_support
