#include "jpegrdh/error.hpp"

namespace jpegrdh {

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> offset) {
  std::string out{to_string(code)};
  out += ": ";
  out += message;
  if (offset) {
    out += " (at byte offset " + std::to_string(*offset) + ")";
  }
  return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TruncatedStream: return "TruncatedStream";
    case ErrorCode::InvalidHuffmanCode: return "InvalidHuffmanCode";
    case ErrorCode::MarkerSyntaxError: return "MarkerSyntaxError";
    case ErrorCode::CategoryOverflow: return "CategoryOverflow";
    case ErrorCode::MissingCode: return "MissingCode";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::FrameCorrupt: return "FrameCorrupt";
    case ErrorCode::TooLong: return "TooLong";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> offset)
    : std::runtime_error(decorate(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace jpegrdh
