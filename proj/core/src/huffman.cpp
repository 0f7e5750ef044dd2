#include "huffman.hpp"

#include <limits>
#include <numeric>

namespace jpegrdh::detail {

std::optional<std::string> validate(const HuffmanTable& table) {
  const int total = std::accumulate(table.counts.begin(), table.counts.end(), 0);
  if (total > 256) {
    return "more than 256 codes";
  }
  if (static_cast<std::size_t>(total) != table.symbols.size()) {
    return "symbol count does not match code counts";
  }
  // Kraft: the codes of each length must fit in the space left over.
  std::int64_t code = 0;
  for (int len = 1; len <= 16; ++len) {
    code += table.counts[len - 1];
    if (code > (std::int64_t{1} << len)) {
      return "code lengths overflow the code space";
    }
    code <<= 1;
  }
  return std::nullopt;
}

DecodeTable make_decode_table(const HuffmanTable& table) {
  DecodeTable out;
  std::copy(table.symbols.begin(), table.symbols.end(), out.symbols.begin());
  std::int32_t code = 0;
  std::int32_t k = 0;
  for (int len = 1; len <= 16; ++len) {
    const int n = table.counts[len - 1];
    if (n == 0) {
      out.maxcode[len] = -1;
    } else {
      out.valptr[len] = k;
      out.mincode[len] = code;
      code += n;
      k += n;
      out.maxcode[len] = code - 1;
    }
    code <<= 1;
  }
  out.maxcode[17] = std::numeric_limits<std::int32_t>::max();
  return out;
}

EncodeTable make_encode_table(const HuffmanTable& table) {
  EncodeTable out;
  std::uint32_t code = 0;
  std::size_t k = 0;
  for (int len = 1; len <= 16; ++len) {
    for (int i = 0; i < table.counts[len - 1]; ++i, ++k) {
      const auto symbol = table.symbols[k];
      out.code[symbol] = static_cast<std::uint16_t>(code);
      out.length[symbol] = static_cast<std::uint8_t>(len);
      ++code;
    }
    code <<= 1;
  }
  return out;
}

HuffmanTable build_optimal_table(const std::array<std::uint64_t, 256>& freq_in) {
  constexpr int kSymbols = 257;
  constexpr int kMaxCodeLen = 32;

  std::array<std::uint64_t, kSymbols> freq{};
  std::copy(freq_in.begin(), freq_in.end(), freq.begin());
  freq[256] = 1;  // reserved code point

  std::array<int, kSymbols> codesize{};
  std::array<int, kSymbols> others;
  others.fill(-1);

  for (;;) {
    // Smallest nonzero frequency; ties go to the larger symbol value.
    int c1 = -1;
    std::uint64_t v = std::numeric_limits<std::uint64_t>::max();
    for (int i = 0; i < kSymbols; ++i) {
      if (freq[i] != 0 && freq[i] <= v) {
        v = freq[i];
        c1 = i;
      }
    }
    int c2 = -1;
    v = std::numeric_limits<std::uint64_t>::max();
    for (int i = 0; i < kSymbols; ++i) {
      if (freq[i] != 0 && freq[i] <= v && i != c1) {
        v = freq[i];
        c2 = i;
      }
    }
    if (c2 < 0) {
      break;
    }
    freq[c1] += freq[c2];
    freq[c2] = 0;

    ++codesize[c1];
    while (others[c1] >= 0) {
      c1 = others[c1];
      ++codesize[c1];
    }
    others[c1] = c2;

    ++codesize[c2];
    while (others[c2] >= 0) {
      c2 = others[c2];
      ++codesize[c2];
    }
  }

  std::array<int, kMaxCodeLen + 1> bits{};
  for (int i = 0; i < kSymbols; ++i) {
    if (codesize[i] != 0) {
      ++bits[codesize[i]];
    }
  }

  // Limit code lengths to 16 bits (Annex K.3 "Adjust_BITS").
  for (int i = kMaxCodeLen; i > 16; --i) {
    while (bits[i] > 0) {
      int j = i - 2;
      while (bits[j] == 0) {
        --j;
      }
      bits[i] -= 2;
      bits[i - 1] += 1;
      bits[j + 1] += 2;
      bits[j] -= 1;
    }
  }
  // Drop the reserved code point from the longest length.
  int i = 16;
  while (bits[i] == 0) {
    --i;
  }
  bits[i] -= 1;

  HuffmanTable table;
  for (int len = 1; len <= 16; ++len) {
    table.counts[len - 1] = static_cast<std::uint8_t>(bits[len]);
  }
  for (int len = 1; len <= kMaxCodeLen; ++len) {
    for (int s = 0; s < 256; ++s) {
      if (codesize[s] == len) {
        table.symbols.push_back(static_cast<std::uint8_t>(s));
      }
    }
  }
  return table;
}

}  // namespace jpegrdh::detail
