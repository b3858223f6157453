#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gshare/hashing.hpp"
#include "gshare/protocol.hpp"

using gshare::BitVector;

namespace {

BitVector random_bits(std::size_t count, std::mt19937_64& rng) {
  BitVector b(count);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1u);
  return b;
}

BitVector bits_of(std::uint64_t value, std::size_t width) {
  BitVector b(width);
  for (std::size_t i = 0; i < width; ++i) b[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1u);
  return b;
}

}  // namespace

TEST(SymbolsToBits, BigEndianFixedWidth) {
  const std::vector<std::uint16_t> s{2, 0, 3};
  EXPECT_EQ(gshare::symbols_to_bits<std::uint16_t>(s, 4), (BitVector{1, 0, 0, 0, 1, 1}));
  EXPECT_EQ(gshare::bits_per_symbol(2), 1u);
  EXPECT_EQ(gshare::bits_per_symbol(3), 2u);
  EXPECT_EQ(gshare::bits_per_symbol(5), 3u);
}

TEST(ToeplitzHash, ZeroInputHashesToZero) {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 100; ++rep) {
    const std::vector<std::uint16_t> zeros(16, 0);
    const auto seed = random_bits(gshare::toeplitz_seed_length(16, 1), rng);
    EXPECT_EQ(gshare::privacy_amplify<std::uint16_t>(zeros, 2, seed, 1), BitVector{0});
  }
}

TEST(ToeplitzHash, MatrixDefinition) {
  // k = 2, m = 3: rows (s2 s1 s0) and (s3 s2 s1).
  const BitVector seed{1, 0, 1, 1};
  EXPECT_EQ(gshare::toeplitz_hash({1, 0, 0}, seed, 2), (BitVector{1, 1}));
  EXPECT_EQ(gshare::toeplitz_hash({0, 1, 0}, seed, 2), (BitVector{0, 1}));
  EXPECT_EQ(gshare::toeplitz_hash({0, 0, 1}, seed, 2), (BitVector{1, 0}));
  EXPECT_EQ(gshare::toeplitz_hash({1, 1, 1}, seed, 2), (BitVector{0, 0}));
}

TEST(ToeplitzHash, SinglePairCollisionRate) {
  std::mt19937_64 rng(62);
  const std::vector<std::uint16_t> a{0, 1, 1, 0, 1, 0, 0, 1, 1, 1};
  std::vector<std::uint16_t> b = a;
  b[4] ^= 1;
  constexpr int kSeeds = 10000;
  int collisions = 0;
  for (int i = 0; i < kSeeds; ++i) {
    const auto seed = random_bits(gshare::toeplitz_seed_length(10, 1), rng);
    collisions += gshare::privacy_amplify<std::uint16_t>(a, 2, seed, 1) == gshare::privacy_amplify<std::uint16_t>(b, 2, seed, 1);
  }
  const double sigma = std::sqrt(0.25 / kSeeds);
  EXPECT_NEAR(static_cast<double>(collisions) / kSeeds, 0.5, 3 * sigma);
}

TEST(ToeplitzHash, TwoUniversalExhaustive) {
  // N = 8 input bits, k = 2 output bits: every seed and every input pair.
  constexpr std::size_t kM = 8, kK = 2;
  const std::size_t seed_bits = gshare::toeplitz_seed_length(kM, kK);
  const std::size_t seeds = std::size_t{1} << seed_bits;
  std::vector<std::vector<std::uint64_t>> out(seeds, std::vector<std::uint64_t>(256));
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto seed = bits_of(s, seed_bits);
    for (std::size_t x = 0; x < 256; ++x) out[s][x] = gshare::bits_to_integer(gshare::toeplitz_hash(bits_of(x, kM), seed, kK));
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < 256; ++x) {
    for (std::size_t y = x + 1; y < 256; ++y) {
      std::size_t c = 0;
      for (std::size_t s = 0; s < seeds; ++s) c += out[s][x] == out[s][y];
      worst = std::max(worst, static_cast<double>(c) / static_cast<double>(seeds));
    }
  }
  const double sigma = std::sqrt(0.25 * 0.75 / static_cast<double>(seeds));
  EXPECT_LE(worst, 0.25 + 3 * sigma);
}

TEST(ToeplitzHash, KTooLarge) {
  const std::vector<std::uint16_t> s{1, 0, 1};
  try {
    gshare::privacy_amplify<std::uint16_t>(s, 2, BitVector(6, 0), 4);
    FAIL();
  } catch (const gshare::Error& e) {
    EXPECT_EQ(e.code(), gshare::ErrorCode::KTooLarge);
  }
  EXPECT_THROW(gshare::toeplitz_hash({1, 0, 1}, BitVector(2, 0), 2), gshare::Error);
}

TEST(ToeplitzHash, ZeroOutputBits) {
  EXPECT_EQ(gshare::toeplitz_seed_length(10, 0), 0u);
  EXPECT_TRUE(gshare::toeplitz_hash({1, 0, 1}, {}, 0).empty());
}

TEST(ToeplitzColumns, XorOfColumnsMatchesHash) {
  std::mt19937_64 rng(63);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t m = 1 + rng() % 40;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(m, 20);
    const auto seed = random_bits(gshare::toeplitz_seed_length(m, k), rng);
    const auto cols = gshare::toeplitz_columns(seed, m, k);
    const auto input = random_bits(m, rng);
    std::uint64_t h = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (input[j]) h ^= cols[j];
    }
    EXPECT_EQ(h, gshare::bits_to_integer(gshare::toeplitz_hash(input, seed, k)));
  }
}
