#include "jpegrdh/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "jpegrdh/error.hpp"
#include "jpegrdh/payload.hpp"
#include "jpegrdh/pgm.hpp"

namespace jpegrdh {

void BenchConfig::validate() const {
  if (quality_factors.empty()) {
    throw Error(ErrorCode::PreconditionViolation, "no quality factors");
  }
  for (int q : quality_factors) {
    if (q < 1 || q > 100) {
      throw Error(ErrorCode::PreconditionViolation,
                  "quality factor " + std::to_string(q) + " outside [1,100]");
    }
  }
  if (schemes.empty()) {
    throw Error(ErrorCode::PreconditionViolation, "no schemes selected");
  }
  if (payload_bits.empty()) {
    if (payload_fractions.empty()) {
      throw Error(ErrorCode::PreconditionViolation, "empty payload grid");
    }
    for (std::size_t i = 0; i < payload_fractions.size(); ++i) {
      const double f = payload_fractions[i];
      if (!(f > 0.0 && f <= 1.0) ||
          (i > 0 && !(f > payload_fractions[i - 1]))) {
        throw Error(ErrorCode::PreconditionViolation,
                    "payload fractions must ascend within (0, 1]");
      }
    }
  } else if (!std::is_sorted(payload_bits.begin(), payload_bits.end()) ||
             std::adjacent_find(payload_bits.begin(), payload_bits.end()) !=
                 payload_bits.end()) {
    throw Error(ErrorCode::PreconditionViolation,
                "payload grid must be strictly ascending");
  }
}

Cover make_cover(std::string name, PixelPlane source, int quality) {
  Cover cover;
  cover.name = std::move(name);
  cover.quality = quality;
  cover.bytes = serialize_jpeg(encode_from_pixels(source, quality),
                               TablePolicy::RebuildOptimal);
  cover.image = parse_jpeg(cover.bytes);
  cover.source = std::move(source);
  return cover;
}

BenchRow run_cell(const Cover& cover, SchemeId scheme,
                  std::size_t payload_bits, std::uint64_t seed,
                  PsnrReference reference) {
  BenchRow row;
  row.image = cover.name;
  row.qf = cover.quality;
  row.scheme = scheme;
  row.payload_bits = payload_bits;
  row.capacity_bits = capacity(cover.image, scheme);
  row.orig_bytes = cover.bytes.size();

  const BitSeq payload = random_payload(payload_bits, seed);
  EmbedResult embedded;
  std::vector<std::uint8_t> marked_bytes;
  try {
    embedded = embed_image(cover.image, payload, scheme);
    marked_bytes = serialize_jpeg(embedded.marked, TablePolicy::RebuildOptimal);
  } catch (const Error& e) {
    row.error = e.what();
    return row;
  }

  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::VerificationFailed,
                cover.name + " q" + std::to_string(cover.quality) + " " +
                    std::string(to_string(scheme)) + " " +
                    std::to_string(payload_bits) + " bits: " + what);
  };
  try {
    const JpegImage reparsed = parse_jpeg(marked_bytes);
    if (reparsed.coefficients != embedded.marked.coefficients) {
      fail("marked file does not decode to the marked coefficients");
    }
    const ExtractResult extracted = extract_image(reparsed, scheme);
    if (extracted.payload != payload) {
      fail("extracted payload differs");
    }
    if (extracted.recovered.coefficients != cover.image.coefficients) {
      fail("recovered coefficients differ from the cover");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::VerificationFailed) throw;
    fail(e.what());
  }

  const MetricsReport m =
      reference == PsnrReference::SourcePgm
          ? measure_against(cover.source, embedded.marked, cover.bytes.size(),
                            marked_bytes.size())
          : measure(cover.image, embedded.marked, cover.bytes.size(),
                    marked_bytes.size());
  row.psnr_db = m.psnr_db;
  row.marked_bytes = m.file_size_marked;
  row.size_increase_bytes = m.size_increase;
  row.coeffs_modified = embedded.report.coeffs_modified;
  return row;
}

std::vector<std::size_t> payload_grid(const BenchConfig& config,
                                      const JpegImage& cover) {
  if (!config.payload_bits.empty()) {
    return config.payload_bits;
  }
  const auto cap =
      static_cast<double>(capacity(cover, SchemeId::Huang2016));
  std::vector<std::size_t> grid;
  for (double f : config.payload_fractions) {
    const auto framed = static_cast<std::size_t>(std::floor(f * cap));
    grid.push_back(framed > kFrameHeaderBits ? framed - kFrameHeaderBits : 0);
  }
  return grid;
}

std::vector<std::filesystem::path> list_corpus(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::Io, "corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace {

struct Job {
  std::filesystem::path path;
  int quality;
};

struct JobOutput {
  std::vector<BenchRow> rows;
  CapacityRow capacity;
};

JobOutput run_job(const BenchConfig& config, const Job& job) {
  Cover cover = make_cover(job.path.stem().string(), read_pgm(job.path),
                           job.quality);
  JobOutput out;
  out.capacity.image = cover.name;
  out.capacity.qf = job.quality;
  for (SchemeId s : kAllSchemes) {
    out.capacity.bits[static_cast<std::size_t>(s)] = capacity(cover.image, s);
  }
  const auto grid = payload_grid(config, cover.image);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    // Same bits for every scheme at a given grid point.
    const std::uint64_t seed = config.seed + p;
    for (SchemeId s : config.schemes) {
      out.rows.push_back(
          run_cell(cover, s, grid[p], seed, config.psnr_reference));
    }
  }
  return out;
}

std::vector<CrossoverRow> find_crossovers(const std::vector<BenchRow>& rows) {
  std::map<std::pair<std::string, int>, std::map<std::size_t, std::array<const BenchRow*, 3>>>
      groups;
  std::vector<std::pair<std::string, int>> keys;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.image, r.qf);
    if (!groups.count(key)) keys.push_back(key);
    groups[key][r.payload_bits][static_cast<std::size_t>(r.scheme)] = &r;
  }
  std::vector<CrossoverRow> out;
  for (const auto& key : keys) {
    CrossoverRow row;
    row.image = key.first;
    row.qf = key.second;
    for (const auto& [bits, cell] : groups[key]) {
      const BenchRow* p = cell[static_cast<std::size_t>(SchemeId::Proposed)];
      const BenchRow* h = cell[static_cast<std::size_t>(SchemeId::Huang2016)];
      if (!p || !h || !p->error.empty() || !h->error.empty()) continue;
      ++row.points;
      if (p->size_increase_bytes <= h->size_increase_bytes) {
        ++row.points_proposed_le_huang;
      } else if (!row.first_payload_proposed_gt_huang) {
        row.first_payload_proposed_gt_huang = bits;
      }
    }
    if (row.points > 0) out.push_back(row);
  }
  return out;
}

}  // namespace

BenchResult run_bench(const BenchConfig& config) {
  config.validate();
  std::vector<Job> jobs;
  for (const auto& path : list_corpus(config.corpus_dir)) {
    for (int q : config.quality_factors) jobs.push_back({path, q});
  }

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        outputs[i] = run_job(config, jobs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
      }
    }
  };
  unsigned n = config.jobs ? config.jobs : std::thread::hardware_concurrency();
  n = std::clamp<unsigned>(n, 1, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  BenchResult result;
  for (auto& o : outputs) {
    result.capacities.push_back(o.capacity);
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(result.rows));
  }
  result.crossovers = find_crossovers(result.rows);
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string rows_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "image,qf,scheme,payload_bits,capacity_bits,psnr_db,orig_bytes,"
        "marked_bytes,size_increase_bytes,coeffs_modified,error\n";
  for (const auto& r : rows) {
    os << csv_field(r.image) << ',' << r.qf << ',' << to_string(r.scheme) << ','
       << r.payload_bits << ',' << r.capacity_bits << ',';
    if (r.error.empty()) {
      os << format_db(r.psnr_db) << ',' << r.orig_bytes << ',' << r.marked_bytes
         << ',' << r.size_increase_bytes << ',' << r.coeffs_modified << ',';
    } else {
      os << ",," << r.orig_bytes << ",,,,";
    }
    os << csv_field(r.error) << '\n';
  }
  return os.str();
}

std::string capacity_csv(const std::vector<CapacityRow>& rows,
                         const std::vector<int>& quality_factors) {
  std::ostringstream os;
  os << "image";
  for (int q : quality_factors) {
    for (SchemeId s : {SchemeId::Huang2016, SchemeId::Liu2018, SchemeId::Proposed}) {
      os << ",qf" << q << '_' << to_string(s);
    }
  }
  os << '\n';
  std::vector<std::string> images;
  std::map<std::pair<std::string, int>, const CapacityRow*> index;
  for (const auto& r : rows) {
    if (std::find(images.begin(), images.end(), r.image) == images.end()) {
      images.push_back(r.image);
    }
    index[{r.image, r.qf}] = &r;
  }
  for (const auto& image : images) {
    os << csv_field(image);
    for (int q : quality_factors) {
      const auto it = index.find({image, q});
      for (SchemeId s : {SchemeId::Huang2016, SchemeId::Liu2018, SchemeId::Proposed}) {
        os << ',';
        if (it != index.end()) os << it->second->bits[static_cast<std::size_t>(s)];
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string crossover_csv(const std::vector<CrossoverRow>& rows) {
  std::ostringstream os;
  os << "image,qf,points,points_proposed_le_huang,"
        "first_payload_proposed_gt_huang\n";
  for (const auto& r : rows) {
    os << csv_field(r.image) << ',' << r.qf << ',' << r.points << ','
       << r.points_proposed_le_huang << ',';
    if (r.first_payload_proposed_gt_huang) {
      os << *r.first_payload_proposed_gt_huang;
    }
    os << '\n';
  }
  return os.str();
}

void write_bench_outputs(const BenchResult& result, const BenchConfig& config,
                         const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  }
  auto save = [&](const char* name, const std::string& text) {
    write_file(dir / name,
               std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
  };
  save("bench.csv", rows_csv(result.rows));
  save("capacity.csv", capacity_csv(result.capacities, config.quality_factors));
  save("crossover.csv", crossover_csv(result.crossovers));
}

}  // namespace jpegrdh
