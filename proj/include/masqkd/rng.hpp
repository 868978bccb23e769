/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_RNG_HPP_
#define MASQKD_RNG_HPP_

#include <array>
#include <cstdint>

namespace masqkd {

//============================================================================
// Counter-based randomness: Philox4x32-10
//
// Every random draw in the simulator is a pure function of
// (master seed, domain, stream index, block counter), so independent rounds
// can be evaluated in any order, on any number of workers, with identical
// results. The generator is the Philox4x32 bijection with 10 rounds of
//   hi0,lo0 = mulhilo(0xD2511F53, c0);  hi1,lo1 = mulhilo(0xCD9E8D57, c2)
//   c <- { hi1^c1^k0, lo1, hi0^c3^k1, lo0 }
// with the key schedule k0 += 0x9E3779B9, k1 += 0xBB67AE85 between rounds.
// Counter layout used here: {c0,c1} = block counter, {c2,c3} = stream id,
// where stream id = (domain << 56) | index. Keys = master seed.
//============================================================================

using PhiloxBlock = std::array<std::uint32_t, 4>;

inline PhiloxBlock philox4x32(std::uint64_t key, std::uint64_t ctr_hi,
                              std::uint64_t ctr_lo) {
  std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
  std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
  std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c1 ^ k0;
    const std::uint32_t n2 = hi0 ^ c3 ^ k1;
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return {c0, c1, c2, c3};
}

/// Stream domains keep unrelated consumers of the same master seed apart.
enum class StreamDomain : std::uint64_t {
  Round = 1,        // per-round protocol simulation (index = round number)
  Disclosure = 2,   // check-bit position sampling
  PrivacyAmp = 3,   // Toeplitz hash bits
  Test = 15,        // test-only sampling (attack families, fixtures)
};

/// A deterministic random stream keyed by (seed, domain, index).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index)
      : seed_(seed),
        stream_id_((static_cast<std::uint64_t>(domain) << 56) | index) {}

  std::uint32_t next_u32() {
    if (used_ == 4) {
      buf_ = philox4x32(seed_, stream_id_, block_++);
      used_ = 0;
    }
    return buf_[used_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0,1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Fair coin.
  bool coin() { return uniform() < 0.5; }

  /// Uniform integer in [0,n), n >= 1, by rejection sampling.
  std::uint32_t below(std::uint32_t n) {
    const std::uint32_t limit = UINT32_MAX - UINT32_MAX % n;
    std::uint32_t v;
    do {
      v = next_u32();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  PhiloxBlock buf_{};
  int used_ = 4;
};

}  // namespace masqkd

#endif  // MASQKD_RNG_HPP_
