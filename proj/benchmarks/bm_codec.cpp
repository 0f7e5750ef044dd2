#include <benchmark/benchmark.h>

#include "bench_input.hpp"
#include "jpegrdh/jpeg.hpp"

using namespace jpegrdh;

static void BM_Parse(benchmark::State& state) {
  const Cover& c = bm::cover(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_jpeg(c.bytes));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * c.bytes.size()));
}
BENCHMARK(BM_Parse)->Arg(50)->Arg(90);

static void BM_SerializePreserve(benchmark::State& state) {
  const Cover& c = bm::cover(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_jpeg(c.image, TablePolicy::PreserveOriginal));
  }
}
BENCHMARK(BM_SerializePreserve)->Arg(50)->Arg(90);

static void BM_SerializeOptimal(benchmark::State& state) {
  const Cover& c = bm::cover(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_jpeg(c.image, TablePolicy::RebuildOptimal));
  }
}
BENCHMARK(BM_SerializeOptimal)->Arg(50)->Arg(90);

static void BM_DecodeLuminance(benchmark::State& state) {
  const Cover& c = bm::cover(50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_luminance(c.image));
  }
}
BENCHMARK(BM_DecodeLuminance);

static void BM_EncodeFromPixels(benchmark::State& state) {
  const Cover& c = bm::cover(50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode_from_pixels(c.source, 50));
  }
}
BENCHMARK(BM_EncodeFromPixels);
