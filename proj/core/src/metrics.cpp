#include "jpegrdh/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "jpegrdh/error.hpp"

namespace jpegrdh {

double psnr(const PixelPlane& a, const PixelPlane& b) {
  if (a.width != b.width || a.height != b.height ||
      a.samples.size() != b.samples.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.width) + "x" + std::to_string(a.height) +
                    " vs " + std::to_string(b.width) + "x" +
                    std::to_string(b.height));
  }
  if (a.samples.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "empty planes");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d = static_cast<double>(a.samples[i]) - b.samples[i];
    sum += d * d;
  }
  if (sum == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double mse = sum / static_cast<double>(a.samples.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::string format_db(double db, int digits) {
  if (std::isinf(db)) return db > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, db);
  return buf;
}

namespace {

MetricsReport sizes(std::size_t original_bytes, std::size_t marked_bytes) {
  MetricsReport r;
  r.file_size_original = original_bytes;
  r.file_size_marked = marked_bytes;
  r.size_increase = static_cast<std::int64_t>(marked_bytes) -
                    static_cast<std::int64_t>(original_bytes);
  return r;
}

}  // namespace

MetricsReport measure(const JpegImage& original, const JpegImage& marked,
                      std::size_t original_bytes, std::size_t marked_bytes) {
  if (original.frame.width != marked.frame.width ||
      original.frame.height != marked.frame.height ||
      original.frame.components.size() != marked.frame.components.size()) {
    throw Error(ErrorCode::DimensionMismatch, "frames differ in geometry");
  }
  MetricsReport r = sizes(original_bytes, marked_bytes);
  r.psnr_db = psnr(decode_luminance(original), decode_luminance(marked));
  return r;
}

MetricsReport measure_against(const PixelPlane& reference,
                              const JpegImage& marked,
                              std::size_t original_bytes,
                              std::size_t marked_bytes) {
  MetricsReport r = sizes(original_bytes, marked_bytes);
  r.psnr_db = psnr(reference, decode_luminance(marked));
  return r;
}

}  // namespace jpegrdh
