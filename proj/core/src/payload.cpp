#include "jpegrdh/payload.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "jpegrdh/error.hpp"

namespace jpegrdh {

BitSeq::BitSeq(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

void BitSeq::append(const BitSeq& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitSeq frame(const BitSeq& payload) {
  if (payload.size() > 0xFFFF'FFFFull) {
    throw Error(ErrorCode::TooLong, "payload of " +
                                        std::to_string(payload.size()) +
                                        " bits does not fit a 32-bit header");
  }
  const auto n = static_cast<std::uint32_t>(payload.size());
  BitSeq out;
  for (int i = 31; i >= 0; --i) {
    out.push_back(static_cast<int>((n >> i) & 1u));
  }
  out.append(payload);
  return out;
}

std::uint32_t frame_length(const BitSeq& stream) {
  if (stream.size() < kFrameHeaderBits) {
    throw Error(ErrorCode::FrameCorrupt,
                "stream of " + std::to_string(stream.size()) +
                    " bits is shorter than the length header");
  }
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < kFrameHeaderBits; ++i) {
    n = (n << 1) | static_cast<std::uint32_t>(stream[i]);
  }
  return n;
}

BitSeq unframe(const BitSeq& stream) {
  const std::uint32_t n = frame_length(stream);
  if (n > stream.size() - kFrameHeaderBits) {
    throw Error(ErrorCode::FrameCorrupt,
                "header declares " + std::to_string(n) + " bits but only " +
                    std::to_string(stream.size() - kFrameHeaderBits) +
                    " follow");
  }
  const auto begin = stream.bits().begin() + kFrameHeaderBits;
  return BitSeq(std::vector<std::uint8_t>(begin, begin + n));
}

BitSeq random_payload(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bits(length);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return BitSeq(std::move(bits));
}

BitSeq bits_from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes) {
    for (int i = 7; i >= 0; --i) {
      bits.push_back(static_cast<std::uint8_t>((b >> i) & 1));
    }
  }
  return BitSeq(std::move(bits));
}

std::vector<std::uint8_t> bytes_from_bits(const BitSeq& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (0x80 >> (i % 8)));
    }
  }
  return out;
}

}  // namespace jpegrdh
