#include "jpegrdh/schemes.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "jpegrdh/error.hpp"

namespace jpegrdh {

namespace {

std::string location(const BlockRef& ref, int k) {
  return "component " + std::to_string(ref.component) + " block " +
         std::to_string(ref.index) + " position " + std::to_string(k);
}

/// embed_coeff without range checks; callers validate.
int embed_value(SchemeId scheme, int c, int bit) {
  switch (scheme) {
    case SchemeId::Proposed:
      return bit ? 2 * c - sign(c) : 2 * c;
    case SchemeId::Liu2018:
      return bit ? 2 * c + sign(c) : 2 * c;
    case SchemeId::Huang2016:
      return c + sign(c) * bit;
  }
  return c;
}

[[noreturn]] void overflow(int value, const std::string& where) {
  throw Error(ErrorCode::Overflow, "marked value " + std::to_string(value) +
                                       " exceeds 1023 at " + where);
}

void check_range(int value, const BlockRef& ref, int k) {
  if (std::abs(value) > kMaxAcMagnitude) overflow(value, location(ref, k));
}

void check_range(int value, int original) {
  if (std::abs(value) > kMaxAcMagnitude) {
    overflow(value, "coefficient " + std::to_string(original));
  }
}

CoeffBlock& block_at(JpegImage& image, const BlockRef& ref) {
  return image.coefficients[ref.component].blocks[ref.index];
}

/// Proposed and Liu2018 share traversal and framing; only the per-value map
/// differs.
EmbedReport embed_parity(JpegImage& image, const BitSeq& framed,
                         SchemeId scheme) {
  EmbedReport report;
  std::size_t next = 0;
  for (const BlockRef& ref : block_order(image, scheme)) {
    if (next == framed.size()) break;
    CoeffBlock& block = block_at(image, ref);
    for (int k = 1; k < kBlockSize && next < framed.size(); ++k) {
      const int c = block[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      const int marked = embed_value(scheme, c, framed[next++]);
      check_range(marked, ref, k);
      ++report.coeffs_visited;
      if (marked != c) ++report.coeffs_modified;
      block[static_cast<std::size_t>(k)] = static_cast<Coeff>(marked);
    }
  }
  return report;
}

EmbedReport embed_histogram_shift(JpegImage& image, const BitSeq& framed) {
  EmbedReport report;
  std::size_t next = 0;
  for (const BlockRef& ref : block_order(image, SchemeId::Huang2016)) {
    if (next == framed.size()) break;
    // Every nonzero AC of a visited block is processed, so the receiver can
    // undo the shift up to the end of the block holding the last bit.
    CoeffBlock& block = block_at(image, ref);
    for (int k = 1; k < kBlockSize; ++k) {
      const int c = block[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      ++report.coeffs_visited;
      int marked = c;
      if (std::abs(c) == 1) {
        if (next < framed.size()) marked = embed_value(SchemeId::Huang2016, c, framed[next++]);
      } else {
        marked = c + sign(c);
        check_range(marked, ref, k);
      }
      if (marked != c) ++report.coeffs_modified;
      block[static_cast<std::size_t>(k)] = static_cast<Coeff>(marked);
    }
  }
  return report;
}

}  // namespace

std::string_view to_string(SchemeId scheme) noexcept {
  switch (scheme) {
    case SchemeId::Proposed: return "proposed";
    case SchemeId::Liu2018: return "liu2018";
    case SchemeId::Huang2016: return "huang2016";
  }
  return "unknown";
}

std::optional<SchemeId> parse_scheme(std::string_view name) noexcept {
  for (SchemeId s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

int sign(int x) {
  if (x == 0) {
    throw Error(ErrorCode::ZeroInput, "sign() is undefined for 0");
  }
  return x > 0 ? 1 : -1;
}

int embed_coeff(SchemeId scheme, int c, int bit) {
  if (c == 0) {
    throw Error(ErrorCode::ZeroInput, "zero coefficients carry no data");
  }
  if (bit != 0 && bit != 1) {
    throw Error(ErrorCode::PreconditionViolation, "bit must be 0 or 1");
  }
  if (scheme == SchemeId::Huang2016 && std::abs(c) != 1) {
    throw Error(ErrorCode::PreconditionViolation,
                "Huang2016 embeds only into magnitude-one coefficients, got " +
                    std::to_string(c));
  }
  const int marked = embed_value(scheme, c, bit);
  check_range(marked, c);
  return marked;
}

int shift_coeff(int c) {
  if (std::abs(c) <= 1) {
    throw Error(ErrorCode::PreconditionViolation,
                "only |c| > 1 is shifted, got " + std::to_string(c));
  }
  const int shifted = c + sign(c);
  check_range(shifted, c);
  return shifted;
}

ExtractedCoeff extract_coeff(SchemeId scheme, int marked) {
  const int s = sign(marked);
  const bool even = marked % 2 == 0;
  switch (scheme) {
    case SchemeId::Proposed:
      return even ? ExtractedCoeff{0, marked / 2}
                  : ExtractedCoeff{1, (marked + s) / 2};
    case SchemeId::Liu2018:
      return even ? ExtractedCoeff{0, marked / 2}
                  : ExtractedCoeff{1, (marked - s) / 2};
    case SchemeId::Huang2016:
      switch (std::abs(marked)) {
        case 1: return {0, marked};
        case 2: return {1, s};
        default: return {std::nullopt, marked - s};
      }
  }
  return {std::nullopt, marked};
}

std::size_t capacity(const JpegImage& image, SchemeId scheme) {
  std::size_t n = 0;
  for (const auto& plane : image.coefficients) {
    for (const auto& block : plane.blocks) {
      for (int k = 1; k < kBlockSize; ++k) {
        const int c = block[static_cast<std::size_t>(k)];
        if (scheme == SchemeId::Huang2016 ? std::abs(c) == 1 : c != 0) ++n;
      }
    }
  }
  return n;
}

std::vector<BlockRef> block_order(const JpegImage& image, SchemeId scheme) {
  std::vector<BlockRef> order;
  for (std::size_t c = 0; c < image.coefficients.size(); ++c) {
    for (std::size_t i = 0; i < image.coefficients[c].blocks.size(); ++i) {
      order.push_back({c, i});
    }
  }
  if (scheme == SchemeId::Huang2016) {
    // Zeros are never modified, so the receiver recomputes the same order.
    auto zeros = [&](const BlockRef& r) {
      return image.coefficients[r.component].blocks[r.index].zero_ac_count();
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](const BlockRef& a, const BlockRef& b) {
                       return zeros(a) > zeros(b);
                     });
  }
  return order;
}

EmbedResult embed_image(JpegImage image, const BitSeq& payload,
                        SchemeId scheme) {
  const std::size_t cap = capacity(image, scheme);
  if (payload.size() + kFrameHeaderBits > cap) {
    throw Error(ErrorCode::PayloadTooLarge,
                std::to_string(payload.size()) + " payload bits + " +
                    std::to_string(kFrameHeaderBits) + " header bits exceed " +
                    std::string(to_string(scheme)) + " capacity of " +
                    std::to_string(cap));
  }
  const BitSeq framed = frame(payload);

  EmbedReport report = scheme == SchemeId::Huang2016
                           ? embed_histogram_shift(image, framed)
                           : embed_parity(image, framed, scheme);
  report.scheme = scheme;
  report.capacity_bits = cap;
  report.payload_bits = payload.size();
  report.bits_embedded = framed.size();
  return {std::move(image), report};
}

ExtractResult extract_image(JpegImage marked, SchemeId scheme) {
  std::vector<std::uint8_t> bits;
  std::size_t needed = kFrameHeaderBits;
  bool header_read = false;
  auto take = [&](int bit) {
    bits.push_back(static_cast<std::uint8_t>(bit));
    if (!header_read && bits.size() == kFrameHeaderBits) {
      header_read = true;
      needed += frame_length(BitSeq(bits));
      const std::size_t cap = capacity(marked, scheme);
      if (scheme != SchemeId::Huang2016 && needed > cap) {
        throw Error(ErrorCode::FrameCorrupt,
                    "length header declares " +
                        std::to_string(needed - kFrameHeaderBits) +
                        " bits but only " + std::to_string(cap) +
                        " coefficients are available");
      }
    }
  };

  for (const BlockRef& ref : block_order(marked, scheme)) {
    if (bits.size() == needed) break;
    CoeffBlock& block = block_at(marked, ref);
    for (int k = 1; k < kBlockSize; ++k) {
      const int c = block[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      const bool done = bits.size() == needed;
      if (done && scheme != SchemeId::Huang2016) break;
      const ExtractedCoeff ex = extract_coeff(scheme, c);
      if (ex.bit) {
        if (done) {
          // Past the last bit only untouched ones and shifted values remain.
          if (*ex.bit == 1) {
            throw Error(ErrorCode::FrameCorrupt,
                        "unexpected magnitude-two coefficient at " +
                            location(ref, k));
          }
          continue;
        }
        take(*ex.bit);
      }
      block[static_cast<std::size_t>(k)] = static_cast<Coeff>(ex.restored);
    }
  }
  if (bits.size() != needed) {
    throw Error(ErrorCode::FrameCorrupt,
                "image ran out of coefficients after " +
                    std::to_string(bits.size()) + " of " +
                    std::to_string(needed) + " bits");
  }
  return {unframe(BitSeq(std::move(bits))), std::move(marked)};
}

}  // namespace jpegrdh
