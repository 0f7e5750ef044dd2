#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jpegrdh {

/// Ordered payload bits, one per element, each 0 or 1.
class BitSeq {
 public:
  BitSeq() = default;
  explicit BitSeq(std::vector<std::uint8_t> bits);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i]; }

  void push_back(int bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitSeq& other);

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const BitSeq&, const BitSeq&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Width of the big-endian bit-length prefix written by frame().
inline constexpr std::size_t kFrameHeaderBits = 32;

/// Length prefix followed by the payload. Throws Error{TooLong} if the
/// payload has 2^32 bits or more.
BitSeq frame(const BitSeq& payload);

/// Inverse of frame(). Throws Error{FrameCorrupt} when the header is short
/// or declares more bits than follow it; trailing bits are ignored.
BitSeq unframe(const BitSeq& stream);

/// Reads the declared payload length from the first 32 bits.
std::uint32_t frame_length(const BitSeq& stream);

/// Deterministic bits from std::mt19937_64 seeded with `seed`; each 64-bit
/// draw supplies 64 bits, least significant first.
BitSeq random_payload(std::size_t length, std::uint64_t seed);

/// Most significant bit of each byte first.
BitSeq bits_from_bytes(std::span<const std::uint8_t> bytes);

/// Packs MSB first; a partial final byte is padded with zero bits.
std::vector<std::uint8_t> bytes_from_bits(const BitSeq& bits);

}  // namespace jpegrdh
