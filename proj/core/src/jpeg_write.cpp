#include <string>

#include "huffman.hpp"
#include "jpegrdh/error.hpp"
#include "jpegrdh/jpeg.hpp"

namespace jpegrdh {

namespace {

class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t code, int size) {
    for (int i = size - 1; i >= 0; --i) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((code >> i) & 1));
      if (++count_ == 8) {
        emit(acc_);
        acc_ = 0;
        count_ = 0;
      }
    }
  }

  /// Pad the last byte with one bits.
  void flush() {
    if (count_ > 0) {
      put((1u << (8 - count_)) - 1, 8 - count_);
    }
  }

  void marker(std::uint8_t m) {
    out_.push_back(0xFF);
    out_.push_back(m);
  }

 private:
  void emit(std::uint8_t b) {
    out_.push_back(b);
    if (b == 0xFF) {
      out_.push_back(0x00);
    }
  }

  std::vector<std::uint8_t>& out_;
  std::uint8_t acc_ = 0;
  int count_ = 0;
};

/// Where a scan's symbols go: either counted or Huffman-coded.
struct SymbolCounter {
  std::array<std::array<std::uint64_t, 256>, 4> dc{};
  std::array<std::array<std::uint64_t, 256>, 4> ac{};

  void dc_symbol(int table, int symbol) { ++dc[table][symbol]; }
  void ac_symbol(int table, int symbol) { ++ac[table][symbol]; }
  void extra(int, int) {}
  void restart(int) {}
};

struct SymbolCoder {
  BitWriter writer;
  std::array<detail::EncodeTable, 4> dc;
  std::array<detail::EncodeTable, 4> ac;

  void put(const detail::EncodeTable& t, int table, int symbol, bool is_dc) {
    if (t.length[symbol] == 0) {
      throw Error(ErrorCode::MissingCode,
                  std::string(is_dc ? "DC" : "AC") + " table " +
                      std::to_string(table) + " has no code for symbol " +
                      std::to_string(symbol));
    }
    writer.put(t.code[symbol], t.length[symbol]);
  }
  void dc_symbol(int table, int symbol) { put(dc[table], table, symbol, true); }
  void ac_symbol(int table, int symbol) { put(ac[table], table, symbol, false); }
  void extra(int value, int size) {
    if (size == 0) return;
    const int bits = value < 0 ? value - 1 : value;
    writer.put(static_cast<std::uint32_t>(bits) & ((1u << size) - 1), size);
  }
  void restart(int index) {
    writer.flush();
    writer.marker(static_cast<std::uint8_t>(0xD0 + (index & 7)));
  }
};

template <typename Sink>
void encode_block(const CoeffBlock& block, int& pred, int dc_table,
                  int ac_table, Sink& sink) {
  const int diff = block[0] - pred;
  pred = block[0];
  const int dc_size = size_category(diff);
  if (dc_size > 11) {
    throw Error(ErrorCode::CategoryOverflow,
                "DC difference " + std::to_string(diff) + " needs category " +
                    std::to_string(dc_size));
  }
  sink.dc_symbol(dc_table, dc_size);
  sink.extra(diff, dc_size);

  int run = 0;
  for (int k = 1; k < kBlockSize; ++k) {
    const int v = block[static_cast<std::size_t>(k)];
    if (v == 0) {
      ++run;
      continue;
    }
    while (run > 15) {
      sink.ac_symbol(ac_table, 0xF0);
      run -= 16;
    }
    const int size = size_category(v);
    sink.ac_symbol(ac_table, (run << 4) | size);
    sink.extra(v, size);
    run = 0;
  }
  if (run > 0) {
    sink.ac_symbol(ac_table, 0x00);
  }
}

template <typename Sink>
void encode_scan(const JpegImage& image, Sink& sink) {
  const FrameInfo& f = image.frame;
  const int interval = image.restart_interval;
  std::vector<int> pred(f.components.size(), 0);
  int mcus_done = 0;
  int restarts = 0;
  auto after_mcu = [&](bool more) {
    ++mcus_done;
    if (interval != 0 && more && mcus_done % interval == 0) {
      sink.restart(restarts++);
      std::fill(pred.begin(), pred.end(), 0);
    }
  };

  if (f.components.size() == 1) {
    const auto& info = f.components[0];
    const auto& plane = image.coefficients[0];
    for (int by = 0; by < plane.blocks_high; ++by) {
      for (int bx = 0; bx < plane.blocks_wide; ++bx) {
        encode_block(plane.at(bx, by), pred[0], info.dc_table, info.ac_table,
                     sink);
        after_mcu(by != plane.blocks_high - 1 || bx != plane.blocks_wide - 1);
      }
    }
    return;
  }
  const int mw = f.mcus_wide();
  const int mh = f.mcus_high();
  for (int my = 0; my < mh; ++my) {
    for (int mx = 0; mx < mw; ++mx) {
      for (std::size_t c = 0; c < f.components.size(); ++c) {
        const auto& info = f.components[c];
        const auto& plane = image.coefficients[c];
        for (int v = 0; v < info.v_samp; ++v) {
          for (int h = 0; h < info.h_samp; ++h) {
            encode_block(plane.at(mx * info.h_samp + h, my * info.v_samp + v),
                         pred[c], info.dc_table, info.ac_table, sink);
          }
        }
      }
      after_mcu(my != mh - 1 || mx != mw - 1);
    }
  }
}

void check_coefficients(const JpegImage& image) {
  for (std::size_t c = 0; c < image.coefficients.size(); ++c) {
    const auto& blocks = image.coefficients[c].blocks;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& block = blocks[b];
      if (block[0] > kMaxDcMagnitude || block[0] < -kMaxDcMagnitude) {
        throw Error(ErrorCode::CategoryOverflow,
                    "DC value " + std::to_string(block[0]) + " in component " +
                        std::to_string(c) + " block " + std::to_string(b));
      }
      for (int k = 1; k < kBlockSize; ++k) {
        const int v = block[static_cast<std::size_t>(k)];
        if (v > kMaxAcMagnitude || v < -kMaxAcMagnitude) {
          throw Error(ErrorCode::CategoryOverflow,
                      "AC value " + std::to_string(v) + " in component " +
                          std::to_string(c) + " block " + std::to_string(b) +
                          " position " + std::to_string(k));
        }
      }
    }
  }
}

void put16(std::vector<std::uint8_t>& out, std::size_t v) {
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_segment(std::vector<std::uint8_t>& out, std::uint8_t marker,
                 const std::vector<std::uint8_t>& body) {
  out.push_back(0xFF);
  out.push_back(marker);
  put16(out, body.size() + 2);
  out.insert(out.end(), body.begin(), body.end());
}

}  // namespace

std::vector<std::uint8_t> serialize_jpeg(const JpegImage& image,
                                         TablePolicy policy) {
  const FrameInfo& f = image.frame;
  if (f.components.empty() || image.coefficients.size() != f.components.size()) {
    throw Error(ErrorCode::PreconditionViolation,
                "frame and coefficient planes disagree");
  }
  check_coefficients(image);

  std::array<std::optional<HuffmanTable>, 4> dc_tables;
  std::array<std::optional<HuffmanTable>, 4> ac_tables;
  if (policy == TablePolicy::PreserveOriginal) {
    dc_tables = image.dc_tables;
    ac_tables = image.ac_tables;
  } else {
    SymbolCounter counter;
    encode_scan(image, counter);
    for (const auto& c : f.components) {
      dc_tables[c.dc_table] = detail::build_optimal_table(counter.dc[c.dc_table]);
      ac_tables[c.ac_table] = detail::build_optimal_table(counter.ac[c.ac_table]);
    }
  }
  for (const auto& c : f.components) {
    if (!dc_tables[c.dc_table] || !ac_tables[c.ac_table]) {
      throw Error(ErrorCode::MissingCode, "component " + std::to_string(c.id) +
                                              " selects an undefined Huffman table");
    }
    if (!image.quant_tables[c.quant_id]) {
      throw Error(ErrorCode::PreconditionViolation,
                  "component " + std::to_string(c.id) +
                      " selects an undefined quantization table");
    }
  }

  std::vector<std::uint8_t> out;
  out.reserve(1 << 16);
  out.push_back(0xFF);
  out.push_back(0xD8);

  for (const auto& seg : image.app_segments) {
    put_segment(out, seg.marker, seg.payload);
  }

  std::vector<std::uint8_t> body;
  for (std::size_t id = 0; id < 4; ++id) {
    const auto& q = image.quant_tables[id];
    if (!q) continue;
    bool wide = q->sixteen_bit;
    for (auto v : q->values) wide = wide || v > 255;
    body.push_back(static_cast<std::uint8_t>((wide ? 0x10 : 0x00) | id));
    for (auto v : q->values) {
      if (wide) body.push_back(static_cast<std::uint8_t>(v >> 8));
      body.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
  }
  put_segment(out, 0xDB, body);

  body.clear();
  body.push_back(f.precision);
  put16(body, f.height);
  put16(body, f.width);
  body.push_back(static_cast<std::uint8_t>(f.components.size()));
  for (const auto& c : f.components) {
    body.push_back(c.id);
    body.push_back(static_cast<std::uint8_t>((c.h_samp << 4) | c.v_samp));
    body.push_back(c.quant_id);
  }
  put_segment(out, 0xC0, body);

  body.clear();
  auto append_table = [&](int cls, std::size_t id, const HuffmanTable& t) {
    body.push_back(static_cast<std::uint8_t>((cls << 4) | id));
    body.insert(body.end(), t.counts.begin(), t.counts.end());
    body.insert(body.end(), t.symbols.begin(), t.symbols.end());
  };
  for (std::size_t id = 0; id < 4; ++id) {
    if (dc_tables[id]) append_table(0, id, *dc_tables[id]);
  }
  for (std::size_t id = 0; id < 4; ++id) {
    if (ac_tables[id]) append_table(1, id, *ac_tables[id]);
  }
  put_segment(out, 0xC4, body);

  if (image.restart_interval != 0) {
    body.clear();
    put16(body, image.restart_interval);
    put_segment(out, 0xDD, body);
  }

  body.clear();
  body.push_back(static_cast<std::uint8_t>(f.components.size()));
  for (const auto& c : f.components) {
    body.push_back(c.id);
    body.push_back(static_cast<std::uint8_t>((c.dc_table << 4) | c.ac_table));
  }
  body.push_back(0);
  body.push_back(63);
  body.push_back(0);
  put_segment(out, 0xDA, body);

  SymbolCoder coder{BitWriter(out), {}, {}};
  for (std::size_t id = 0; id < 4; ++id) {
    if (dc_tables[id]) coder.dc[id] = detail::make_encode_table(*dc_tables[id]);
    if (ac_tables[id]) coder.ac[id] = detail::make_encode_table(*ac_tables[id]);
  }
  encode_scan(image, coder);
  coder.writer.flush();

  out.push_back(0xFF);
  out.push_back(0xD9);
  return out;
}

}  // namespace jpegrdh
