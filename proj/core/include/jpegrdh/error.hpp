#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jpegrdh {

enum class ErrorCode {
  // jpeg codec
  UnsupportedFormat,
  TruncatedStream,
  InvalidHuffmanCode,
  MarkerSyntaxError,
  CategoryOverflow,
  MissingCode,
  // coefficient transforms
  ZeroInput,
  PreconditionViolation,
  Overflow,
  // image-level embedding and payload framing
  PayloadTooLarge,
  FrameCorrupt,
  TooLong,
  // metrics
  DimensionMismatch,
  // everything touching the filesystem
  Io,
  // a round trip that should have been exact was not
  VerificationFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library. `offset()` is set for
/// bitstream errors and points at the byte where decoding gave up.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace jpegrdh
