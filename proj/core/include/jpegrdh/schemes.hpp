#pragma once

// Reversible data hiding in quantized JPEG AC coefficients.
//
// Three schemes share one interface:
//
//   Proposed   C -> 2C            (bit 0)
//              C -> 2C - sign(C)  (bit 1)   moves toward zero
//   Liu2018    C -> 2C            (bit 0)
//              C -> 2C + sign(C)  (bit 1)   moves away from zero
//   Huang2016  |C| == 1 carries a bit: C -> C + sign(C) * bit
//              |C| >  1 is shifted outward: C -> C + sign(C)
//
// Proposed and Liu2018 use every nonzero AC coefficient; the bit is the
// parity of the marked value. Huang2016 only embeds into magnitude-one
// coefficients and visits blocks with the most zero ACs first.
//
// Zero coefficients and DC terms are never touched by any scheme, and every
// transform preserves sign, so the receiver can invert blindly.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "jpegrdh/jpeg.hpp"
#include "jpegrdh/payload.hpp"

namespace jpegrdh {

enum class SchemeId { Proposed, Liu2018, Huang2016 };

inline constexpr std::array<SchemeId, 3> kAllSchemes = {
    SchemeId::Proposed, SchemeId::Liu2018, SchemeId::Huang2016};

/// "proposed", "liu2018", "huang2016".
std::string_view to_string(SchemeId scheme) noexcept;
std::optional<SchemeId> parse_scheme(std::string_view name) noexcept;

/// +1 for positive, -1 for negative; Error{ZeroInput} for 0.
int sign(int x);

/// Marked value for one nonzero AC coefficient. For Huang2016 only |c| == 1
/// is accepted (larger magnitudes go through shift_coeff). Throws
/// Error{ZeroInput}, Error{PreconditionViolation} or Error{Overflow} when
/// the result would leave [-1023, 1023].
int embed_coeff(SchemeId scheme, int c, int bit);

/// Huang2016 histogram shift for |c| > 1.
int shift_coeff(int c);

struct ExtractedCoeff {
  /// Empty for Huang2016 coefficients that were only shifted.
  std::optional<int> bit;
  int restored = 0;

  friend bool operator==(const ExtractedCoeff&, const ExtractedCoeff&) = default;
};

ExtractedCoeff extract_coeff(SchemeId scheme, int marked);

/// Proposed/Liu2018: number of nonzero AC coefficients over all components.
/// Huang2016: number of AC coefficients with magnitude exactly one.
/// The length header counts against this.
std::size_t capacity(const JpegImage& image, SchemeId scheme);

/// Position of one block in the image.
struct BlockRef {
  std::size_t component = 0;
  std::size_t index = 0;  // raster index inside the component's grid

  friend bool operator==(const BlockRef&, const BlockRef&) = default;
};

/// Block visiting order. Components in frame (scan) order, blocks in raster
/// order; Huang2016 then stable-sorts by descending zero-AC count. Within a
/// block coefficients are visited in zigzag order 1..63.
std::vector<BlockRef> block_order(const JpegImage& image, SchemeId scheme);

struct EmbedReport {
  SchemeId scheme = SchemeId::Proposed;
  std::size_t capacity_bits = 0;
  std::size_t payload_bits = 0;
  /// Payload plus the 32-bit length header.
  std::size_t bits_embedded = 0;
  std::size_t coeffs_modified = 0;
  std::size_t coeffs_visited = 0;
};

struct EmbedResult {
  JpegImage marked;
  EmbedReport report;
};

struct ExtractResult {
  BitSeq payload;
  JpegImage recovered;
};

/// Frames the payload and embeds it. Throws Error{PayloadTooLarge} when the
/// framed payload exceeds capacity() and Error{Overflow} naming the
/// component/block/position of the first coefficient that would leave the
/// baseline range.
EmbedResult embed_image(JpegImage image, const BitSeq& payload,
                        SchemeId scheme);

/// Blind inverse of embed_image. Throws Error{FrameCorrupt} when the length
/// header asks for more bits than the image can hold.
ExtractResult extract_image(JpegImage marked, SchemeId scheme);

}  // namespace jpegrdh
