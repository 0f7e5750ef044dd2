#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "jpegrdh/jpeg.hpp"
#include "jpegrdh/schemes.hpp"

namespace jpegrdh {

/// 10*log10(255^2 / MSE). Identical planes give +infinity.
/// Throws Error{DimensionMismatch}.
double psnr(const PixelPlane& a, const PixelPlane& b);

/// "inf" for infinite values, otherwise fixed with `digits` decimals.
std::string format_db(double db, int digits = 4);

struct MetricsReport {
  SchemeId scheme = SchemeId::Proposed;
  std::size_t payload_bits = 0;
  double psnr_db = 0.0;
  std::size_t file_size_original = 0;
  std::size_t file_size_marked = 0;
  /// marked - original; negative when embedding shrinks the file.
  std::int64_t size_increase = 0;
};

/// PSNR between the decoded luminance planes plus serialized sizes.
MetricsReport measure(const JpegImage& original, const JpegImage& marked,
                      std::size_t original_bytes, std::size_t marked_bytes);

/// As above, but PSNR against an external reference plane (e.g. the PGM the
/// JPEG was compressed from).
MetricsReport measure_against(const PixelPlane& reference,
                              const JpegImage& marked,
                              std::size_t original_bytes,
                              std::size_t marked_bytes);

}  // namespace jpegrdh
