#include "slt/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace slt {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline void philox_round(std::uint32_t* c, std::uint32_t k0, std::uint32_t k1) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
  const std::uint32_t n1 = lo1;
  const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
  const std::uint32_t n3 = lo0;
  c[0] = n0;
  c[1] = n1;
  c[2] = n2;
  c[3] = n3;
}

}  // namespace

CounterRng::Block CounterRng::block(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) {
  std::uint32_t c[4] = {
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
  };
  std::uint32_t k0 = static_cast<std::uint32_t>(seed);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return Block{c[0], c[1], c[2], c[3]};
}

double CounterRng::uniform_open(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t index) {
  const Block b = block(seed, stream, index);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  // 53 significant bits, shifted into (0, 1].
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t index) {
  const Block b = block(seed, stream, index);
  const std::uint64_t hi =
      (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  const std::uint64_t lo =
      (static_cast<std::uint64_t>(b[2]) << 32) | b[3];
  const double u1 = static_cast<double>((hi >> 11) + 1) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(lo >> 11) * 0x1.0p-53;        // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace slt
