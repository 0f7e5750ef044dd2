#include <algorithm>
#include <cmath>
#include <numbers>

#include "jpegrdh/error.hpp"
#include "jpegrdh/jpeg.hpp"

namespace jpegrdh {

namespace {

using Block = std::array<double, kBlockSize>;

// basis[u][x] = C(u)/2 * cos((2x+1)u*pi/16), orthonormal 8-point DCT-II.
const std::array<std::array<double, 8>, 8> kBasis = [] {
  std::array<std::array<double, 8>, 8> b{};
  for (int u = 0; u < 8; ++u) {
    const double cu = u == 0 ? std::numbers::sqrt2 / 2.0 : 1.0;
    for (int x = 0; x < 8; ++x) {
      b[u][x] = cu / 2.0 * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
  }
  return b;
}();

/// Separable inverse: spatial[y][x] = sum_v sum_u B[v][y] B[u][x] F[v][u].
Block idct(const Block& freq) {
  Block tmp{};
  for (int v = 0; v < 8; ++v) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += kBasis[u][x] * freq[v * 8 + u];
      tmp[v * 8 + x] = s;
    }
  }
  Block out{};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += kBasis[v][y] * tmp[v * 8 + x];
      out[y * 8 + x] = s;
    }
  }
  return out;
}

Block fdct(const Block& spatial) {
  Block tmp{};
  for (int y = 0; y < 8; ++y) {
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += kBasis[u][x] * spatial[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  }
  Block out{};
  for (int v = 0; v < 8; ++v) {
    for (int u = 0; u < 8; ++u) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += kBasis[v][y] * tmp[y * 8 + u];
      out[v * 8 + u] = s;
    }
  }
  return out;
}

std::uint8_t to_sample(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v + 128.0), 0.0, 255.0));
}

}  // namespace

std::vector<PixelPlane> decode_to_pixels(const JpegImage& image) {
  const FrameInfo& f = image.frame;
  std::vector<PixelPlane> planes;
  for (std::size_t c = 0; c < f.components.size(); ++c) {
    const auto& qt = image.quant_tables[f.components[c].quant_id];
    if (!qt) {
      throw Error(ErrorCode::PreconditionViolation,
                  "component selects an undefined quantization table");
    }
    const int w = f.component_width(c);
    const int h = f.component_height(c);
    PixelPlane plane(w, h);
    const auto& coeffs = image.coefficients[c];
    const int bw = std::min(coeffs.blocks_wide, (w + 7) / 8);
    const int bh = std::min(coeffs.blocks_high, (h + 7) / 8);
    for (int by = 0; by < bh; ++by) {
      for (int bx = 0; bx < bw; ++bx) {
        const CoeffBlock& block = coeffs.at(bx, by);
        Block freq{};
        for (int k = 0; k < kBlockSize; ++k) {
          freq[kZigzagToNatural[k]] =
              static_cast<double>(block[static_cast<std::size_t>(k)]) *
              qt->values[k];
        }
        const Block spatial = idct(freq);
        for (int y = 0; y < 8 && by * 8 + y < h; ++y) {
          for (int x = 0; x < 8 && bx * 8 + x < w; ++x) {
            plane.at(bx * 8 + x, by * 8 + y) = to_sample(spatial[y * 8 + x]);
          }
        }
      }
    }
    planes.push_back(std::move(plane));
  }
  return planes;
}

PixelPlane decode_luminance(const JpegImage& image) {
  auto planes = decode_to_pixels(image);
  return std::move(planes.front());
}

JpegImage encode_from_pixels(const PixelPlane& plane, int quality) {
  if (quality < 1 || quality > 100) {
    throw Error(ErrorCode::PreconditionViolation,
                "quality must be in [1, 100], got " + std::to_string(quality));
  }
  if (plane.width <= 0 || plane.height <= 0 || plane.width > 65535 ||
      plane.height > 65535 ||
      plane.samples.size() != static_cast<std::size_t>(plane.width) *
                                  static_cast<std::size_t>(plane.height)) {
    throw Error(ErrorCode::PreconditionViolation, "bad pixel plane geometry");
  }

  JpegImage image;
  image.frame.width = static_cast<std::uint16_t>(plane.width);
  image.frame.height = static_cast<std::uint16_t>(plane.height);
  image.frame.components.push_back(ComponentInfo{});
  QuantTable qt;
  qt.values = scale_quant_table(kAnnexKLuminance, quality);
  image.quant_tables[0] = qt;
  image.dc_tables[0] = standard_luminance_dc_table();
  image.ac_tables[0] = standard_luminance_ac_table();
  image.app_segments.push_back(
      Segment{0xE0, {'J', 'F', 'I', 'F', 0, 1, 1, 0, 0, 1, 0, 1, 0, 0}});

  const int bw = (plane.width + 7) / 8;
  const int bh = (plane.height + 7) / 8;
  CoeffPlane coeffs(bw, bh);
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      Block spatial{};
      for (int y = 0; y < 8; ++y) {
        // Edge pixels are replicated into the padding.
        const int sy = std::min(by * 8 + y, plane.height - 1);
        for (int x = 0; x < 8; ++x) {
          const int sx = std::min(bx * 8 + x, plane.width - 1);
          spatial[y * 8 + x] = plane.at(sx, sy) - 128.0;
        }
      }
      const Block freq = fdct(spatial);
      CoeffBlock& block = coeffs.at(bx, by);
      for (int k = 0; k < kBlockSize; ++k) {
        const long q = std::lround(freq[kZigzagToNatural[k]] / qt.values[k]);
        const long limit = k == 0 ? kMaxDcMagnitude : kMaxAcMagnitude;
        block[static_cast<std::size_t>(k)] =
            static_cast<Coeff>(std::clamp(q, -limit, limit));
      }
    }
  }
  image.coefficients.push_back(std::move(coeffs));
  return image;
}

}  // namespace jpegrdh
