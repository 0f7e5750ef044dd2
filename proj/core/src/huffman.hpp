#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "jpegrdh/jpeg.hpp"

namespace jpegrdh::detail {

/// Canonical code assignment for decoding (T.81 Annex C / F.2.2.3).
struct DecodeTable {
  std::array<std::int32_t, 17> mincode{};
  std::array<std::int32_t, 18> maxcode{};  // maxcode[17] is a sentinel
  std::array<std::int32_t, 17> valptr{};
  std::array<std::uint8_t, 256> symbols{};
};

/// Per-symbol code and length for encoding; length 0 means "no code".
struct EncodeTable {
  std::array<std::uint16_t, 256> code{};
  std::array<std::uint8_t, 256> length{};
};

/// Returns a description of the defect, or nullopt if the table is a
/// well-formed prefix code.
std::optional<std::string> validate(const HuffmanTable& table);

DecodeTable make_decode_table(const HuffmanTable& table);
EncodeTable make_encode_table(const HuffmanTable& table);

/// Optimal length-limited table from symbol frequencies, using the
/// procedure of T.81 Annex K.2 (one code point reserved so no code is all
/// ones). Only symbols with nonzero frequency get codes.
HuffmanTable build_optimal_table(const std::array<std::uint64_t, 256>& freq);

}  // namespace jpegrdh::detail
