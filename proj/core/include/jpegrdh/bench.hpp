#pragma once

// Experiment harness: PGM corpus -> JPEG covers at several quality factors
// -> embed seeded payloads with every scheme -> verify, measure, tabulate.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jpegrdh/jpeg.hpp"
#include "jpegrdh/metrics.hpp"
#include "jpegrdh/schemes.hpp"

namespace jpegrdh {

enum class PsnrReference {
  /// Decoded unmarked JPEG; isolates embedding distortion.
  DecodedJpeg,
  /// The PGM the cover was compressed from.
  SourcePgm,
};

struct BenchConfig {
  std::filesystem::path corpus_dir;
  std::vector<int> quality_factors{50, 70, 90};
  /// Fractions of each cover's Huang2016 capacity (header included). Used
  /// when payload_bits is empty.
  std::vector<double> payload_fractions{0.1, 0.2, 0.3, 0.4, 0.5,
                                        0.6, 0.7, 0.8, 0.9, 1.0};
  /// Absolute payload sizes, overriding the fractions.
  std::vector<std::size_t> payload_bits;
  std::uint64_t seed = 2019;
  std::vector<SchemeId> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  PsnrReference psnr_reference = PsnrReference::DecodedJpeg;
  /// 0 = hardware concurrency.
  unsigned jobs = 0;

  /// Throws Error{PreconditionViolation} on QF outside [1,100] or a grid
  /// that is not strictly ascending.
  void validate() const;
};

/// A cover in canonical form: produced by our own serializer with optimal
/// tables, so serialize(parse(bytes), PreserveOriginal) == bytes.
struct Cover {
  std::string name;
  int quality = 0;
  PixelPlane source;
  JpegImage image;
  std::vector<std::uint8_t> bytes;
};

Cover make_cover(std::string name, PixelPlane source, int quality);

struct BenchRow {
  std::string image;
  int qf = 0;
  SchemeId scheme = SchemeId::Proposed;
  std::size_t payload_bits = 0;
  std::size_t capacity_bits = 0;
  double psnr_db = 0.0;
  std::size_t orig_bytes = 0;
  std::size_t marked_bytes = 0;
  std::int64_t size_increase_bytes = 0;
  std::size_t coeffs_modified = 0;
  /// Empty on success, otherwise the error code name and message.
  std::string error;
};

/// Embeds `payload_bits` seeded bits into `cover`, writes the marked file
/// with optimal tables, re-parses and extracts it, and checks payload and
/// coefficients against the cover. A failed check throws
/// Error{VerificationFailed}; embedding errors land in BenchRow::error.
BenchRow run_cell(const Cover& cover, SchemeId scheme,
                  std::size_t payload_bits, std::uint64_t seed,
                  PsnrReference reference = PsnrReference::DecodedJpeg);

/// Payload sizes for one cover under `config`.
std::vector<std::size_t> payload_grid(const BenchConfig& config,
                                      const JpegImage& cover);

struct CapacityRow {
  std::string image;
  int qf = 0;
  std::array<std::size_t, 3> bits{};  // indexed by SchemeId
};

/// Where Proposed's size increase first exceeds Huang2016's on one cover.
struct CrossoverRow {
  std::string image;
  int qf = 0;
  std::size_t points = 0;
  std::size_t points_proposed_le_huang = 0;
  /// Smallest payload with size(Proposed) > size(Huang2016), if any.
  std::optional<std::size_t> first_payload_proposed_gt_huang;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<CapacityRow> capacities;
  std::vector<CrossoverRow> crossovers;
};

/// Runs the whole grid. Rows are ordered by (image, qf, payload, scheme)
/// regardless of how many worker threads run.
BenchResult run_bench(const BenchConfig& config);

/// Sorted *.pgm files of a directory.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir);

std::string rows_csv(const std::vector<BenchRow>& rows);
/// One row per image, a column per (qf, scheme).
std::string capacity_csv(const std::vector<CapacityRow>& rows,
                         const std::vector<int>& quality_factors);
std::string crossover_csv(const std::vector<CrossoverRow>& rows);

/// Writes bench.csv, capacity.csv and crossover.csv into `dir`.
void write_bench_outputs(const BenchResult& result, const BenchConfig& config,
                         const std::filesystem::path& dir);

}  // namespace jpegrdh
