#pragma once

#include "jpegrdh/bench.hpp"
#include "jpegrdh/pgm.hpp"

namespace bm {

inline const jpegrdh::Cover& cover(int quality) {
  static const jpegrdh::PixelPlane plane = jpegrdh::read_pgm(JPEGRDH_BENCH_IMAGE);
  static const jpegrdh::Cover q50 = jpegrdh::make_cover("camera", plane, 50);
  static const jpegrdh::Cover q90 = jpegrdh::make_cover("camera", plane, 90);
  return quality >= 90 ? q90 : q50;
}

}  // namespace bm
