#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jpegrdh/bench.hpp"
#include "jpegrdh/error.hpp"
#include "jpegrdh/jpeg.hpp"
#include "jpegrdh/metrics.hpp"
#include "jpegrdh/payload.hpp"
#include "jpegrdh/pgm.hpp"
#include "jpegrdh/schemes.hpp"

namespace fs = std::filesystem;
using namespace jpegrdh;
using json = nlohmann::ordered_json;

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return 2;
    case ErrorCode::UnsupportedFormat: return 3;
    case ErrorCode::PayloadTooLarge: return 4;
    case ErrorCode::Overflow: return 5;
    case ErrorCode::FrameCorrupt: return 6;
    case ErrorCode::TruncatedStream:
    case ErrorCode::InvalidHuffmanCode:
    case ErrorCode::MarkerSyntaxError: return 7;
    case ErrorCode::CategoryOverflow:
    case ErrorCode::MissingCode: return 8;
    case ErrorCode::TooLong: return 9;
    case ErrorCode::DimensionMismatch: return 10;
    case ErrorCode::VerificationFailed: return 11;
    case ErrorCode::ZeroInput:
    case ErrorCode::PreconditionViolation: return 12;
  }
  return 1;
}

const std::map<std::string, SchemeId> kSchemeNames{
    {"proposed", SchemeId::Proposed},
    {"liu2018", SchemeId::Liu2018},
    {"huang2016", SchemeId::Huang2016},
};

const std::map<std::string, TablePolicy> kPolicyNames{
    {"optimal", TablePolicy::RebuildOptimal},
    {"preserve", TablePolicy::PreserveOriginal},
};

JpegImage read_jpeg(const fs::path& path) { return parse_jpeg(read_file(path)); }

void print_report(const json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
              << '\n';
  }
}

struct EmbedArgs {
  fs::path in, out;
  SchemeId scheme = SchemeId::Proposed;
  std::optional<fs::path> payload_file;
  std::optional<std::size_t> random_bits;
  std::uint64_t seed = 2019;
  TablePolicy policy = TablePolicy::RebuildOptimal;
  std::string psnr_ref = "jpeg";
  bool json = false;
};

int cmd_embed(const EmbedArgs& a) {
  const auto cover_bytes = read_file(a.in);
  const JpegImage cover = parse_jpeg(cover_bytes);
  const BitSeq payload = a.payload_file ? bits_from_bytes(read_file(*a.payload_file))
                                        : random_payload(*a.random_bits, a.seed);
  const EmbedResult result = embed_image(cover, payload, a.scheme);
  const auto marked_bytes = serialize_jpeg(result.marked, a.policy);
  // Sizes are compared under one table policy so stale tables do not count.
  const auto original_bytes = serialize_jpeg(cover, a.policy);

  MetricsReport m;
  if (a.psnr_ref.rfind("pgm:", 0) == 0) {
    m = measure_against(read_pgm(a.psnr_ref.substr(4)), result.marked, original_bytes.size(),
                        marked_bytes.size());
  } else if (a.psnr_ref == "jpeg") {
    m = measure(cover, result.marked, original_bytes.size(), marked_bytes.size());
  } else {
    throw Error(ErrorCode::PreconditionViolation,
                "--psnr-ref must be 'jpeg' or 'pgm:PATH', got '" + a.psnr_ref + "'");
  }
  write_file(a.out, marked_bytes);

  const EmbedReport& r = result.report;
  json j;
  j["scheme"] = std::string(to_string(r.scheme));
  j["capacity_bits"] = r.capacity_bits;
  j["payload_bits"] = r.payload_bits;
  j["bits_embedded"] = r.bits_embedded;
  j["coeffs_visited"] = r.coeffs_visited;
  j["coeffs_modified"] = r.coeffs_modified;
  j["psnr_db"] = format_db(m.psnr_db);
  j["psnr_reference"] = a.psnr_ref;
  j["file_size_input"] = cover_bytes.size();
  j["file_size_original"] = m.file_size_original;
  j["file_size_marked"] = m.file_size_marked;
  j["size_increase"] = m.size_increase;
  j["output"] = a.out.string();
  print_report(j, a.json);
  return 0;
}

int cmd_extract(const fs::path& in, const std::optional<fs::path>& payload_out,
                const std::optional<fs::path>& recovered_out, SchemeId scheme,
                TablePolicy policy, bool as_json) {
  const ExtractResult result = extract_image(read_jpeg(in), scheme);
  json j;
  j["scheme"] = std::string(to_string(scheme));
  j["payload_bits"] = result.payload.size();
  if (payload_out) {
    write_file(*payload_out, bytes_from_bits(result.payload));
    j["payload_out"] = payload_out->string();
  }
  if (recovered_out) {
    write_file(*recovered_out, serialize_jpeg(result.recovered, policy));
    j["recovered_out"] = recovered_out->string();
  }
  print_report(j, as_json);
  return 0;
}

int cmd_capacity(const std::vector<fs::path>& inputs, bool as_json) {
  json all = json::array();
  for (const auto& path : inputs) {
    const JpegImage image = read_jpeg(path);
    json j;
    j["file"] = path.string();
    for (SchemeId s : kAllSchemes) j[std::string(to_string(s))] = capacity(image, s);
    all.push_back(j);
  }
  if (as_json) {
    std::cout << all.dump(2) << '\n';
  } else {
    std::cout << "file,proposed,liu2018,huang2016\n";
    for (const auto& j : all) {
      std::cout << j["file"].get<std::string>() << ',' << j["proposed"] << ',' << j["liu2018"]
                << ',' << j["huang2016"] << '\n';
    }
  }
  return 0;
}

int cmd_gen_corpus(const fs::path& corpus, const std::vector<int>& qfs, const fs::path& out) {
  fs::create_directories(out);
  for (const auto& pgm : list_corpus(corpus)) {
    const PixelPlane plane = read_pgm(pgm);
    for (int q : qfs) {
      const Cover cover = make_cover(pgm.stem().string(), plane, q);
      const fs::path dst = out / (pgm.stem().string() + "_qf" + std::to_string(q) + ".jpg");
      write_file(dst, cover.bytes);
      std::cout << dst.string() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible data hiding in JPEG quantized AC coefficients"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print reports as JSON");

  // Options land in strings first and are mapped after parsing.
  std::vector<std::pair<std::string*, SchemeId*>> scheme_opts;
  std::vector<std::pair<std::string*, TablePolicy*>> policy_opts;
  std::list<std::string> option_text;
  auto add_scheme = [&](CLI::App* cmd, SchemeId& target) {
    std::string& text = option_text.emplace_back();
    cmd->add_option("--scheme", text, "proposed | liu2018 | huang2016")
        ->required()
        ->check(CLI::IsMember(kSchemeNames));
    scheme_opts.emplace_back(&text, &target);
  };
  auto add_policy = [&](CLI::App* cmd, TablePolicy& target) {
    std::string& text = option_text.emplace_back("optimal");
    cmd->add_option("--table-policy", text, "Huffman tables of written files")
        ->check(CLI::IsMember(kPolicyNames))
        ->capture_default_str();
    policy_opts.emplace_back(&text, &target);
  };

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "Hide a payload in a baseline JPEG");
  embed_cmd->add_option("input", embed.in, "Cover JPEG")->required();
  embed_cmd->add_option("output", embed.out, "Marked JPEG")->required();
  add_scheme(embed_cmd, embed.scheme);
  auto* payload_opt = embed_cmd->add_option("--payload", embed.payload_file, "Payload file");
  auto* bits_opt =
      embed_cmd->add_option("--random-bits", embed.random_bits, "Seeded random payload length");
  payload_opt->excludes(bits_opt);
  embed_cmd->add_option("--seed", embed.seed, "Seed for --random-bits")->capture_default_str();
  embed_cmd->add_option("--psnr-ref", embed.psnr_ref, "jpeg | pgm:PATH")->capture_default_str();
  add_policy(embed_cmd, embed.policy);

  fs::path ex_in;
  std::optional<fs::path> ex_payload, ex_recovered;
  SchemeId ex_scheme = SchemeId::Proposed;
  TablePolicy ex_policy = TablePolicy::RebuildOptimal;
  auto* extract_cmd = app.add_subcommand("extract", "Recover the payload and the cover");
  extract_cmd->add_option("input", ex_in, "Marked JPEG")->required();
  extract_cmd->add_option("--payload-out", ex_payload, "Where to write the payload bytes");
  extract_cmd->add_option("--recovered-out", ex_recovered, "Where to write the recovered JPEG");
  add_scheme(extract_cmd, ex_scheme);
  add_policy(extract_cmd, ex_policy);

  fs::path rec_in, rec_out;
  SchemeId rec_scheme = SchemeId::Proposed;
  TablePolicy rec_policy = TablePolicy::RebuildOptimal;
  auto* recover_cmd = app.add_subcommand("recover", "Write the recovered cover only");
  recover_cmd->add_option("input", rec_in, "Marked JPEG")->required();
  recover_cmd->add_option("output", rec_out, "Recovered JPEG")->required();
  add_scheme(recover_cmd, rec_scheme);
  add_policy(recover_cmd, rec_policy);

  std::vector<fs::path> cap_inputs;
  auto* capacity_cmd = app.add_subcommand("capacity", "Embedding capacity per scheme");
  capacity_cmd->add_option("inputs", cap_inputs, "JPEG files")->required();

  BenchConfig bench;
  fs::path bench_out = "bench_out";
  std::string bench_ref = "jpeg";
  std::vector<std::string> bench_schemes;
  auto* bench_cmd = app.add_subcommand("bench", "Run the embedding grid over a PGM corpus");
  bench_cmd->add_option("--corpus", bench.corpus_dir, "Directory of *.pgm files")->required();
  bench_cmd->add_option("--qf", bench.quality_factors, "Quality factors")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--fractions", bench.payload_fractions,
                        "Payload points as fractions of Huang2016 capacity")
      ->delimiter(',');
  bench_cmd->add_option("--payload-bits", bench.payload_bits, "Absolute payload points")
      ->delimiter(',');
  bench_cmd->add_option("--scheme", bench_schemes, "Subset of schemes")
      ->delimiter(',')
      ->check(CLI::IsMember({"proposed", "liu2018", "huang2016"}));
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--psnr-ref", bench_ref, "jpeg | pgm")
      ->check(CLI::IsMember({"jpeg", "pgm"}))
      ->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads, 0 = all cores");
  bench_cmd->add_option("--out", bench_out, "Output directory")->capture_default_str();

  fs::path gen_corpus, gen_out = "corpus_jpeg";
  std::vector<int> gen_qf{50, 70, 90};
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Compress a PGM corpus to JPEG covers");
  gen_cmd->add_option("--corpus", gen_corpus, "Directory of *.pgm files")->required();
  gen_cmd->add_option("--qf", gen_qf, "Quality factors")->delimiter(',')->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  for (auto& [text, target] : scheme_opts) {
    if (!text->empty()) *target = kSchemeNames.at(*text);
  }
  for (auto& [text, target] : policy_opts) *target = kPolicyNames.at(*text);

  try {
    if (*embed_cmd) {
      if (!embed.payload_file && !embed.random_bits) {
        throw CLI::RequiredError("--payload or --random-bits");
      }
      embed.json = as_json;
      return cmd_embed(embed);
    }
    if (*extract_cmd) {
      return cmd_extract(ex_in, ex_payload, ex_recovered, ex_scheme, ex_policy, as_json);
    }
    if (*recover_cmd) {
      const ExtractResult r = extract_image(read_jpeg(rec_in), rec_scheme);
      write_file(rec_out, serialize_jpeg(r.recovered, rec_policy));
      return 0;
    }
    if (*capacity_cmd) return cmd_capacity(cap_inputs, as_json);
    if (*bench_cmd) {
      if (!bench_schemes.empty()) {
        bench.schemes.clear();
        for (const auto& s : bench_schemes) bench.schemes.push_back(kSchemeNames.at(s));
      }
      bench.psnr_reference =
          bench_ref == "pgm" ? PsnrReference::SourcePgm : PsnrReference::DecodedJpeg;
      const BenchResult result = run_bench(bench);
      write_bench_outputs(result, bench, bench_out);
      std::size_t failed = 0;
      for (const auto& row : result.rows) failed += !row.error.empty();
      std::cout << result.rows.size() << " rows, " << failed << " failed cells, written to "
                << bench_out.string() << '\n';
      return 0;
    }
    if (*gen_cmd) return cmd_gen_corpus(gen_corpus, gen_qf, gen_out);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "jpegrdh: " << e.what() << '\n';
    return exit_code(e.code());
  }
  return 0;
}
