#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gshare/error.hpp"

namespace gshare {

using BitVector = std::vector<std::uint8_t>;  // one bit (0/1) per entry

// Bits needed per symbol of an alphabet of the given size (at least 1).
inline std::size_t bits_per_symbol(std::size_t alphabet) {
  return alphabet <= 2 ? 1 : static_cast<std::size_t>(std::bit_width(alphabet - 1));
}

// Big-endian fixed-width binary expansion of each symbol.
template <typename Symbol>
BitVector symbols_to_bits(std::span<const Symbol> symbols, std::size_t alphabet) {
  const std::size_t w = bits_per_symbol(alphabet);
  BitVector bits;
  bits.reserve(symbols.size() * w);
  for (Symbol s : symbols) {
    for (std::size_t b = w; b-- > 0;) bits.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(s) >> b) & 1u));
  }
  return bits;
}

inline std::size_t toeplitz_seed_length(std::size_t input_bits, std::size_t k) {
  return k == 0 ? 0 : input_bits + k - 1;
}

// Toeplitz hashing over GF(2): the k x m matrix T(i, j) = seed[i - j + m - 1]
// applied to the input bits. The family indexed by uniform seeds is
// 2-universal.
inline BitVector toeplitz_hash(const BitVector& input, const BitVector& seed, std::size_t k) {
  const std::size_t m = input.size();
  if (k > m) {
    throw Error(ErrorCode::KTooLarge, "output of " + std::to_string(k) + " bits exceeds " + std::to_string(m) +
                                          " input bits");
  }
  if (seed.size() != toeplitz_seed_length(m, k)) {
    throw Error(ErrorCode::InvalidInput, "Toeplitz seed must have m + k - 1 bits");
  }
  BitVector out(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < m; ++j) acc ^= static_cast<std::uint8_t>(seed[i + m - 1 - j] & input[j]);
    out[i] = acc;
  }
  return out;
}

// Extracts k secret bits from a symbol sequence over an alphabet of
// `alphabet` letters using a public Toeplitz seed.
template <typename Symbol>
BitVector privacy_amplify(std::span<const Symbol> symbols, std::size_t alphabet, const BitVector& seed, std::size_t k) {
  return toeplitz_hash(symbols_to_bits(symbols, alphabet), seed, k);
}

inline std::uint64_t bits_to_integer(const BitVector& bits) {
  std::uint64_t v = 0;
  for (std::uint8_t b : bits) v = (v << 1) | b;
  return v;
}

}  // namespace gshare
