#include "keccak.hpp"

#include <cstring>
#include <vector>

namespace dappcheck {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr int kRotations[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55,
                                20, 3,  10, 43, 25, 39, 41, 45, 15,
                                21, 8,  18, 2,  61, 56, 14};

inline std::uint64_t rotl(std::uint64_t x, int n) {
  return n == 0 ? x : (x << n) | (x >> (64 - n));
}

void keccak_f1600(std::uint64_t st[25]) {
  for (std::uint64_t rc : kRoundConstants) {
    std::uint64_t c[5];
    for (int x = 0; x < 5; ++x)
      c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
    for (int x = 0; x < 5; ++x) {
      std::uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 25; y += 5) st[x + y] ^= d;
    }
    // rho + pi
    std::uint64_t b[25];
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y)
        b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(st[x + 5 * y], kRotations[x + 5 * y]);
    // chi
    for (int y = 0; y < 25; y += 5)
      for (int x = 0; x < 5; ++x)
        st[x + y] = b[x + y] ^ (~b[(x + 1) % 5 + y] & b[(x + 2) % 5 + y]);
    st[0] ^= rc;
  }
}

}  // namespace

std::array<std::uint8_t, 32> keccak256(std::span<const std::uint8_t> data) {
  constexpr std::size_t kRate = 136;
  std::uint64_t st[25] = {};
  auto absorb = [&](const std::uint8_t* block) {
    for (std::size_t i = 0; i < kRate / 8; ++i) {
      std::uint64_t lane = 0;
      for (int j = 7; j >= 0; --j) lane = (lane << 8) | block[i * 8 + j];
      st[i] ^= lane;
    }
    keccak_f1600(st);
  };

  std::size_t off = 0;
  while (data.size() - off >= kRate) {
    absorb(data.data() + off);
    off += kRate;
  }
  std::uint8_t last[kRate] = {};
  std::memcpy(last, data.data() + off, data.size() - off);
  last[data.size() - off] ^= 0x01;
  last[kRate - 1] ^= 0x80;
  absorb(last);

  std::array<std::uint8_t, 32> out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      out[i * 8 + j] = static_cast<std::uint8_t>(st[i] >> (8 * j));
  return out;
}

std::array<std::uint8_t, 32> keccak256(std::string_view text) {
  return keccak256(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Word digest_word(const std::array<std::uint8_t, 32>& digest) {
  Word w = 0;
  for (std::uint8_t b : digest) w = (w << 8) | Word(b);
  return w;
}

Word keccak_word(const Word& w) {
  std::array<std::uint8_t, 32> bytes{};
  Word v = w;
  for (int i = 31; i >= 0; --i) {
    bytes[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return digest_word(keccak256(std::span<const std::uint8_t>(bytes)));
}

Selector selector_of(std::string_view signature) {
  auto d = keccak256(signature);
  return Selector{(std::uint32_t(d[0]) << 24) | (std::uint32_t(d[1]) << 16) |
                  (std::uint32_t(d[2]) << 8) | std::uint32_t(d[3])};
}

}  // namespace dappcheck
