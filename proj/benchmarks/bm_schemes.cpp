#include <benchmark/benchmark.h>

#include "bench_input.hpp"
#include "jpegrdh/payload.hpp"
#include "jpegrdh/schemes.hpp"

using namespace jpegrdh;

namespace {

SchemeId scheme_arg(const benchmark::State& state) {
  return static_cast<SchemeId>(state.range(0));
}

BitSeq full_payload(const Cover& c, SchemeId s) {
  return random_payload(capacity(c.image, s) - kFrameHeaderBits, 1);
}

}  // namespace

static void BM_Embed(benchmark::State& state) {
  const Cover& c = bm::cover(90);
  const SchemeId s = scheme_arg(state);
  const BitSeq payload = full_payload(c, s);
  state.SetLabel(std::string(to_string(s)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(embed_image(c.image, payload, s));
  }
  state.counters["bits"] = static_cast<double>(payload.size());
}
BENCHMARK(BM_Embed)->DenseRange(0, 2);

static void BM_Extract(benchmark::State& state) {
  const Cover& c = bm::cover(90);
  const SchemeId s = scheme_arg(state);
  const JpegImage marked = embed_image(c.image, full_payload(c, s), s).marked;
  state.SetLabel(std::string(to_string(s)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_image(marked, s));
  }
}
BENCHMARK(BM_Extract)->DenseRange(0, 2);

static void BM_CoeffSweep(benchmark::State& state) {
  for (auto _ : state) {
    int acc = 0;
    for (int c = -511; c <= 511; ++c) {
      if (c == 0) continue;
      acc += embed_coeff(SchemeId::Proposed, c, c & 1);
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_CoeffSweep);
