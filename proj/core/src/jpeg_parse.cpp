#include <algorithm>
#include <string>

#include "huffman.hpp"
#include "jpegrdh/error.hpp"
#include "jpegrdh/jpeg.hpp"

namespace jpegrdh {

namespace {

constexpr std::uint8_t kSOI = 0xD8;
constexpr std::uint8_t kEOI = 0xD9;
constexpr std::uint8_t kSOS = 0xDA;
constexpr std::uint8_t kDQT = 0xDB;
constexpr std::uint8_t kDNL = 0xDC;
constexpr std::uint8_t kDRI = 0xDD;
constexpr std::uint8_t kDHT = 0xC4;
constexpr std::uint8_t kDAC = 0xCC;
constexpr std::uint8_t kSOF0 = 0xC0;
constexpr std::uint8_t kRST0 = 0xD0;
constexpr std::uint8_t kCOM = 0xFE;

bool is_app(std::uint8_t m) { return m >= 0xE0 && m <= 0xEF; }
bool is_sof(std::uint8_t m) {
  return m >= 0xC0 && m <= 0xCF && m != kDHT && m != 0xC8 && m != kDAC;
}

const char* sof_description(std::uint8_t m) {
  switch (m) {
    case 0xC1: return "extended sequential (SOF1)";
    case 0xC2: return "progressive (SOF2)";
    case 0xC3: return "lossless (SOF3)";
    case 0xC5: case 0xC6: case 0xC7: return "hierarchical";
    case 0xC9: case 0xCA: case 0xCB: case 0xCD: case 0xCE: case 0xCF:
      return "arithmetic-coded";
    default: return "non-baseline";
  }
}

/// Reads entropy-coded bits starting at `pos`, unstuffing 0xFF00. Hitting a
/// marker while bits are still needed is a truncated stream.
class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> data, std::size_t pos)
      : data_(data), pos_(pos) {}

  int bit() {
    if (count_ == 0) {
      fill();
    }
    --count_;
    return (acc_ >> count_) & 1;
  }

  int bits(int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) {
      v = (v << 1) | bit();
    }
    return v;
  }

  int decode(const detail::DecodeTable& table) {
    const std::size_t start = pos_;
    std::int32_t code = bit();
    int len = 1;
    while (code > table.maxcode[len]) {
      if (len == 16) {
        throw Error(ErrorCode::InvalidHuffmanCode, "no Huffman code matches",
                    start);
      }
      code = (code << 1) | bit();
      ++len;
    }
    return table.symbols[table.valptr[len] + code - table.mincode[len]];
  }

  /// Discard buffered bits and consume the expected RSTn marker.
  void restart(int expected_index) {
    count_ = 0;
    while (pos_ + 1 < data_.size() && data_[pos_] == 0xFF &&
           data_[pos_ + 1] == 0xFF) {
      ++pos_;
    }
    if (pos_ + 1 >= data_.size()) {
      throw Error(ErrorCode::TruncatedStream, "missing restart marker", pos_);
    }
    const auto want = static_cast<std::uint8_t>(kRST0 + (expected_index & 7));
    if (data_[pos_] != 0xFF || data_[pos_ + 1] != want) {
      throw Error(ErrorCode::MarkerSyntaxError,
                  "expected RST" + std::to_string(expected_index & 7), pos_);
    }
    pos_ += 2;
  }

  /// Offset of the first byte not consumed by the scan.
  std::size_t finish() {
    count_ = 0;
    return pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  void fill() {
    if (pos_ >= data_.size()) {
      throw Error(ErrorCode::TruncatedStream, "entropy-coded data ends early",
                  pos_);
    }
    std::uint8_t b = data_[pos_];
    if (b == 0xFF) {
      if (pos_ + 1 >= data_.size()) {
        throw Error(ErrorCode::TruncatedStream, "dangling 0xFF in scan", pos_);
      }
      if (data_[pos_ + 1] != 0x00) {
        throw Error(ErrorCode::TruncatedStream,
                    "marker reached inside entropy-coded data", pos_);
      }
      pos_ += 2;
    } else {
      ++pos_;
    }
    acc_ = b;
    count_ = 8;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_;
  std::uint32_t acc_ = 0;
  int count_ = 0;
};

int extend(int v, int s) {
  return s == 0 ? 0 : (v < (1 << (s - 1)) ? v - (1 << s) + 1 : v);
}

class Parser {
 public:
  explicit Parser(std::span<const std::uint8_t> bytes) : data_(bytes) {}

  JpegImage run() {
    if (data_.size() < 2 || data_[0] != 0xFF || data_[1] != kSOI) {
      throw Error(ErrorCode::MarkerSyntaxError, "missing SOI marker", 0);
    }
    pos_ = 2;
    for (;;) {
      const std::size_t marker_at = pos_;
      const std::uint8_t m = next_marker();
      if (m == kEOI) {
        break;
      }
      if (m >= kRST0 && m <= kRST0 + 7) {
        throw Error(ErrorCode::MarkerSyntaxError, "RST marker outside a scan",
                    marker_at);
      }
      if (m == kSOI) {
        throw Error(ErrorCode::MarkerSyntaxError, "repeated SOI", marker_at);
      }
      const std::span<const std::uint8_t> body = segment_body(marker_at);
      const std::size_t body_at = marker_at + 4;
      if (is_sof(m)) {
        if (m != kSOF0) {
          throw Error(ErrorCode::UnsupportedFormat,
                      std::string(sof_description(m)) + " JPEG", marker_at);
        }
        read_frame(body, body_at);
      } else if (m == kDHT) {
        read_dht(body, body_at);
      } else if (m == kDQT) {
        read_dqt(body, body_at);
      } else if (m == kDRI) {
        if (body.size() != 2) {
          throw Error(ErrorCode::MarkerSyntaxError, "DRI length must be 4",
                      marker_at);
        }
        image_.restart_interval =
            static_cast<std::uint16_t>((body[0] << 8) | body[1]);
      } else if (m == kSOS) {
        read_scan(body, body_at);
      } else if (m == kDAC) {
        throw Error(ErrorCode::UnsupportedFormat, "arithmetic coding (DAC)",
                    marker_at);
      } else if (m == kDNL) {
        throw Error(ErrorCode::UnsupportedFormat, "DNL marker", marker_at);
      } else if (is_app(m) || m == kCOM) {
        image_.app_segments.push_back(
            Segment{m, std::vector<std::uint8_t>(body.begin(), body.end())});
      }
      // Any other marker with a length (JPGn, reserved) is skipped.
    }
    if (!have_frame_) {
      throw Error(ErrorCode::MarkerSyntaxError, "no SOF0 frame header", pos_);
    }
    if (scans_ == 0) {
      throw Error(ErrorCode::MarkerSyntaxError, "no scan before EOI", pos_);
    }
    return std::move(image_);
  }

 private:
  std::uint8_t next_marker() {
    if (pos_ >= data_.size()) {
      throw Error(ErrorCode::TruncatedStream, "missing EOI marker", pos_);
    }
    if (data_[pos_] != 0xFF) {
      throw Error(ErrorCode::MarkerSyntaxError, "expected a marker", pos_);
    }
    while (pos_ < data_.size() && data_[pos_] == 0xFF) {
      ++pos_;
    }
    if (pos_ >= data_.size()) {
      throw Error(ErrorCode::TruncatedStream, "marker cut off", pos_);
    }
    return data_[pos_++];
  }

  std::span<const std::uint8_t> segment_body(std::size_t marker_at) {
    if (pos_ + 2 > data_.size()) {
      throw Error(ErrorCode::TruncatedStream, "segment length cut off", pos_);
    }
    const std::size_t len = (std::size_t{data_[pos_]} << 8) | data_[pos_ + 1];
    if (len < 2) {
      throw Error(ErrorCode::MarkerSyntaxError, "segment length below 2",
                  marker_at);
    }
    if (pos_ + len > data_.size()) {
      throw Error(ErrorCode::TruncatedStream, "segment runs past end of data",
                  marker_at);
    }
    auto body = data_.subspan(pos_ + 2, len - 2);
    pos_ += len;
    return body;
  }

  void read_frame(std::span<const std::uint8_t> b, std::size_t at) {
    if (have_frame_) {
      throw Error(ErrorCode::MarkerSyntaxError, "second frame header", at);
    }
    if (b.size() < 6) {
      throw Error(ErrorCode::MarkerSyntaxError, "SOF0 too short", at);
    }
    FrameInfo& f = image_.frame;
    f.precision = b[0];
    if (f.precision != 8) {
      throw Error(ErrorCode::UnsupportedFormat,
                  std::to_string(f.precision) + "-bit sample precision", at);
    }
    f.height = static_cast<std::uint16_t>((b[1] << 8) | b[2]);
    f.width = static_cast<std::uint16_t>((b[3] << 8) | b[4]);
    const int n = b[5];
    if (f.height == 0) {
      throw Error(ErrorCode::UnsupportedFormat, "height defined by DNL", at);
    }
    if (f.width == 0 || n == 0 || n > 4) {
      throw Error(ErrorCode::MarkerSyntaxError, "bad frame dimensions", at);
    }
    if (b.size() != 6 + 3 * static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::MarkerSyntaxError, "SOF0 length mismatch", at);
    }
    for (int i = 0; i < n; ++i) {
      ComponentInfo c;
      c.id = b[6 + 3 * i];
      c.h_samp = static_cast<std::uint8_t>(b[7 + 3 * i] >> 4);
      c.v_samp = static_cast<std::uint8_t>(b[7 + 3 * i] & 15);
      c.quant_id = b[8 + 3 * i];
      if (c.h_samp < 1 || c.h_samp > 4 || c.v_samp < 1 || c.v_samp > 4 ||
          c.quant_id > 3) {
        throw Error(ErrorCode::MarkerSyntaxError, "bad component parameters",
                    at + 6 + 3 * static_cast<std::size_t>(i));
      }
      for (const auto& prev : f.components) {
        if (prev.id == c.id) {
          throw Error(ErrorCode::MarkerSyntaxError, "duplicate component id",
                      at);
        }
      }
      f.components.push_back(c);
    }
    if (n > 1) {
      int blocks_per_mcu = 0;
      for (const auto& c : f.components) blocks_per_mcu += c.h_samp * c.v_samp;
      if (blocks_per_mcu > 10) {
        throw Error(ErrorCode::MarkerSyntaxError, "more than 10 blocks per MCU",
                    at);
      }
    }
    // Every block costs at least two bits (DC size + EOB), so a frame that
    // needs more blocks than the rest of the file could hold is truncated.
    std::size_t total_blocks = 0;
    for (std::size_t c = 0; c < f.components.size(); ++c) {
      total_blocks += n == 1
          ? std::size_t((f.component_width(c) + 7) / 8) * ((f.component_height(c) + 7) / 8)
          : std::size_t(f.mcus_wide()) * f.mcus_high() * f.components[c].h_samp *
                f.components[c].v_samp;
    }
    if (total_blocks > 4 * (data_.size() - pos_)) {
      throw Error(ErrorCode::TruncatedStream,
                  "frame needs " + std::to_string(total_blocks) +
                      " blocks but too few bytes remain",
                  at);
    }
    image_.coefficients.clear();
    for (std::size_t c = 0; c < f.components.size(); ++c) {
      if (n == 1) {
        image_.coefficients.emplace_back((f.component_width(c) + 7) / 8,
                                         (f.component_height(c) + 7) / 8);
      } else {
        image_.coefficients.emplace_back(f.mcus_wide() * f.components[c].h_samp,
                                         f.mcus_high() * f.components[c].v_samp);
      }
    }
    have_frame_ = true;
  }

  void read_dqt(std::span<const std::uint8_t> b, std::size_t at) {
    std::size_t i = 0;
    while (i < b.size()) {
      const int pq = b[i] >> 4;
      const int tq = b[i] & 15;
      if (pq > 1 || tq > 3) {
        throw Error(ErrorCode::MarkerSyntaxError, "bad DQT table header",
                    at + i);
      }
      const std::size_t need = 1 + (pq ? 128 : 64);
      if (i + need > b.size()) {
        throw Error(ErrorCode::MarkerSyntaxError, "DQT table cut off", at + i);
      }
      QuantTable t;
      t.sixteen_bit = pq == 1;
      for (int k = 0; k < kBlockSize; ++k) {
        t.values[k] = pq ? static_cast<std::uint16_t>((b[i + 1 + 2 * k] << 8) |
                                                      b[i + 2 + 2 * k])
                         : b[i + 1 + k];
        if (t.values[k] == 0) {
          throw Error(ErrorCode::MarkerSyntaxError, "zero quantizer", at + i);
        }
      }
      image_.quant_tables[tq] = t;
      i += need;
    }
  }

  void read_dht(std::span<const std::uint8_t> b, std::size_t at) {
    std::size_t i = 0;
    while (i < b.size()) {
      if (i + 17 > b.size()) {
        throw Error(ErrorCode::MarkerSyntaxError, "DHT header cut off", at + i);
      }
      const int tc = b[i] >> 4;
      const int th = b[i] & 15;
      if (tc > 1 || th > 3) {
        throw Error(ErrorCode::MarkerSyntaxError, "bad DHT table class/id",
                    at + i);
      }
      HuffmanTable t;
      std::size_t total = 0;
      for (int l = 0; l < 16; ++l) {
        t.counts[l] = b[i + 1 + l];
        total += t.counts[l];
      }
      if (i + 17 + total > b.size()) {
        throw Error(ErrorCode::MarkerSyntaxError, "DHT symbols cut off", at + i);
      }
      t.symbols.assign(b.begin() + static_cast<std::ptrdiff_t>(i + 17),
                       b.begin() + static_cast<std::ptrdiff_t>(i + 17 + total));
      if (auto defect = detail::validate(t)) {
        throw Error(ErrorCode::InvalidHuffmanCode, "DHT: " + *defect, at + i);
      }
      (tc == 0 ? image_.dc_tables : image_.ac_tables)[th] = std::move(t);
      i += 17 + total;
    }
  }

  void read_scan(std::span<const std::uint8_t> b, std::size_t at) {
    if (!have_frame_) {
      throw Error(ErrorCode::MarkerSyntaxError, "SOS before SOF0", at);
    }
    if (b.empty()) {
      throw Error(ErrorCode::MarkerSyntaxError, "empty SOS", at);
    }
    const int ns = b[0];
    if (ns < 1 || ns > 4 || b.size() != 4 + 2 * static_cast<std::size_t>(ns)) {
      throw Error(ErrorCode::MarkerSyntaxError, "SOS length mismatch", at);
    }
    auto& comps = image_.frame.components;
    std::vector<std::size_t> scan_comps;
    for (int i = 0; i < ns; ++i) {
      const std::uint8_t id = b[1 + 2 * i];
      auto it = std::find_if(comps.begin(), comps.end(),
                             [id](const ComponentInfo& c) { return c.id == id; });
      if (it == comps.end()) {
        throw Error(ErrorCode::MarkerSyntaxError, "scan names unknown component",
                    at + 1 + 2 * static_cast<std::size_t>(i));
      }
      it->dc_table = static_cast<std::uint8_t>(b[2 + 2 * i] >> 4);
      it->ac_table = static_cast<std::uint8_t>(b[2 + 2 * i] & 15);
      if (it->dc_table > 3 || it->ac_table > 3) {
        throw Error(ErrorCode::MarkerSyntaxError, "bad table selector", at);
      }
      scan_comps.push_back(static_cast<std::size_t>(it - comps.begin()));
    }
    const std::size_t p = 1 + 2 * static_cast<std::size_t>(ns);
    if (b[p] != 0 || b[p + 1] != 63 || b[p + 2] != 0) {
      throw Error(ErrorCode::MarkerSyntaxError,
                  "spectral selection/approximation not baseline", at + p);
    }

    struct ScanComponent {
      std::size_t index;
      detail::DecodeTable dc;
      detail::DecodeTable ac;
      int pred = 0;
    };
    std::vector<ScanComponent> sc;
    for (std::size_t c : scan_comps) {
      const auto& info = comps[c];
      const auto& dc = image_.dc_tables[info.dc_table];
      const auto& ac = image_.ac_tables[info.ac_table];
      if (!dc || !ac) {
        throw Error(ErrorCode::MarkerSyntaxError,
                    "scan uses an undefined Huffman table", at);
      }
      sc.push_back({c, detail::make_decode_table(*dc),
                    detail::make_decode_table(*ac), 0});
    }

    BitReader reader(data_, pos_);
    auto decode_block = [&](ScanComponent& s, CoeffBlock& block) {
      const std::size_t block_at = reader.position();
      const int t = reader.decode(s.dc);
      if (t > 11) {
        throw Error(ErrorCode::InvalidHuffmanCode,
                    "DC size category above 11", block_at);
      }
      s.pred += extend(reader.bits(t), t);
      if (s.pred < -32768 || s.pred > 32767) {
        throw Error(ErrorCode::InvalidHuffmanCode, "DC value out of range",
                    block_at);
      }
      block = CoeffBlock{};
      block[0] = static_cast<Coeff>(s.pred);
      for (int k = 1; k < kBlockSize;) {
        const int rs = reader.decode(s.ac);
        const int r = rs >> 4;
        const int sz = rs & 15;
        if (sz == 0) {
          if (r != 15) break;
          k += 16;
          if (k > kBlockSize) {
            throw Error(ErrorCode::InvalidHuffmanCode,
                        "zero run past end of block", reader.position());
          }
          continue;
        }
        k += r;
        if (k >= kBlockSize || sz > 10) {
          throw Error(ErrorCode::InvalidHuffmanCode, "bad AC run/size symbol",
                      reader.position());
        }
        block[static_cast<std::size_t>(k)] =
            static_cast<Coeff>(extend(reader.bits(sz), sz));
        ++k;
      }
    };

    const FrameInfo& f = image_.frame;
    const int interval = image_.restart_interval;
    int mcus_done = 0;
    int restarts = 0;
    auto maybe_restart = [&](bool more) {
      ++mcus_done;
      if (interval != 0 && more && mcus_done % interval == 0) {
        reader.restart(restarts++);
        for (auto& s : sc) s.pred = 0;
      }
    };

    if (sc.size() == 1) {
      auto& s = sc[0];
      auto& plane = image_.coefficients[s.index];
      const int bw = (f.component_width(s.index) + 7) / 8;
      const int bh = (f.component_height(s.index) + 7) / 8;
      for (int by = 0; by < bh; ++by) {
        for (int bx = 0; bx < bw; ++bx) {
          decode_block(s, plane.at(bx, by));
          maybe_restart(by != bh - 1 || bx != bw - 1);
        }
      }
    } else {
      const int mw = f.mcus_wide();
      const int mh = f.mcus_high();
      for (int my = 0; my < mh; ++my) {
        for (int mx = 0; mx < mw; ++mx) {
          for (auto& s : sc) {
            const auto& info = comps[s.index];
            auto& plane = image_.coefficients[s.index];
            for (int v = 0; v < info.v_samp; ++v) {
              for (int h = 0; h < info.h_samp; ++h) {
                decode_block(s, plane.at(mx * info.h_samp + h,
                                         my * info.v_samp + v));
              }
            }
          }
          maybe_restart(my != mh - 1 || mx != mw - 1);
        }
      }
    }
    pos_ = reader.finish();
    // Skip a trailing RST some encoders emit after the last MCU, and any
    // stray bytes before the next real marker.
    while (pos_ + 1 < data_.size() &&
           !(data_[pos_] == 0xFF && data_[pos_ + 1] != 0x00 &&
             !(data_[pos_ + 1] >= kRST0 && data_[pos_ + 1] <= kRST0 + 7) &&
             data_[pos_ + 1] != 0xFF)) {
      ++pos_;
    }
    ++scans_;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  JpegImage image_;
  bool have_frame_ = false;
  int scans_ = 0;
};

}  // namespace

JpegImage parse_jpeg(std::span<const std::uint8_t> bytes) {
  return Parser(bytes).run();
}

}  // namespace jpegrdh
