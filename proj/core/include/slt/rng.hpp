#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace slt {

// Counter-based generator (Philox4x32-10). Every draw is a pure function of
// (seed, stream, index), so any element of any stream can be sampled in any
// order, from any thread, with bit-identical results.
//
// Streams are used for Monte-Carlo path indices; the index folds together
// (time step, component) at the call site.
class CounterRng {
 public:
  using Block = std::array<std::uint32_t, 4>;

  /// Raw 128-bit block for counter (index, stream) under the given seed.
  static Block block(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t index);

  /// Uniform double in (0, 1] (never exactly 0, safe for log()).
  static double uniform_open(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t index);

  /// Standard normal deviate via Box-Muller; one block per call.
  static double gaussian(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index);
};

/// FNV-1a 64-bit hash; used for stable config fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace slt
