/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "masqkd/rng.hpp"

using namespace masqkd;

// Published known-answer vectors for Philox4x32 with 10 rounds.
TEST_CASE("philox4x32 known answers") {
  {
    const PhiloxBlock out = philox4x32(0, 0, 0);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const PhiloxBlock out =
        philox4x32(0xffffffffffffffffull, 0xffffffffffffffffull,
                   0xffffffffffffffffull);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    // counter = digits of pi, key = further digits
    const PhiloxBlock out = philox4x32(0x299f31d0a4093822ull,
                                       0x0370734413198a2eull,
                                       0x85a308d3243f6a88ull);
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("streams are reproducible and keyed") {
  RandomStream a(42, StreamDomain::Round, 7);
  RandomStream b(42, StreamDomain::Round, 7);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }

  RandomStream c(42, StreamDomain::Round, 8);
  RandomStream d(42, StreamDomain::Disclosure, 7);
  RandomStream e(43, StreamDomain::Round, 7);
  RandomStream f(42, StreamDomain::Round, 7);
  int differs_c = 0, differs_d = 0, differs_e = 0;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t ref = f.next_u64();
    differs_c += c.next_u64() != ref;
    differs_d += d.next_u64() != ref;
    differs_e += e.next_u64() != ref;
  }
  CHECK(differs_c > 0);
  CHECK(differs_d > 0);
  CHECK(differs_e > 0);
}

TEST_CASE("uniform range and coin balance") {
  RandomStream rng(1, StreamDomain::Test, 0);
  int heads = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    heads += u < 0.5;
  }
  // 4 sigma around 10000 for 20000 fair coins
  CHECK(std::abs(heads - 10000) < 4 * 71);
}

TEST_CASE("below stays in range and hits all residues") {
  RandomStream rng(2, StreamDomain::Test, 0);
  int seen[7] = {0};
  for (int i = 0; i < 7000; ++i) {
    const std::uint32_t v = rng.below(7);
    REQUIRE(v < 7);
    ++seen[v];
  }
  for (int count : seen) {
    CHECK(count > 0);
  }
}
