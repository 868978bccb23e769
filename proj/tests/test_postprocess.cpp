/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "masqkd/postprocess.hpp"
#include "test_util.hpp"

using namespace masqkd;

namespace {

ExperimentConfig honest(ProtocolKind kind, std::uint64_t n,
                        std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.protocol = kind;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

/// Synthetic transcript with the given candidate bit pairs, no check rounds.
Transcript synthetic_candidates(const std::vector<std::pair<int, int>>& bits,
                                double disclosure_fraction, std::uint64_t seed) {
  Transcript t;
  t.config.n = std::max<std::uint64_t>(1, bits.size() / 8 + 1);
  t.config.seed = seed;
  t.config.disclosure_fraction = disclosure_fraction;
  int index = 0;
  for (const auto& [a, b] : bits) {
    RoundRecord r;
    r.round_index = index++;
    r.round_case = RoundCase::Case2;
    r.alice_key_bit = a;
    r.bob_key_bit = b;
    if (a == b) r.shared_bit = a;
    t.rounds.push_back(r);
  }
  return t;
}

/// Plain quadratic Toeplitz multiply, the independent oracle.
std::vector<int> toeplitz_naive(const std::vector<int>& bits,
                                std::size_t out_len,
                                const std::vector<std::uint8_t>& diag) {
  std::vector<int> out(out_len, 0);
  const std::size_t n = bits.size();
  for (std::size_t i = 0; i < out_len; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i] ^= diag[i + n - 1 - j] & bits[j];
    }
  }
  return out;
}

std::vector<int> random_bits(std::size_t n, RandomStream& rng) {
  std::vector<int> bits(n);
  for (auto& b : bits) b = rng.coin() ? 1 : 0;
  return bits;
}

}  // namespace

TEST_CASE("sifting an honest base run") {
  const Transcript t = run_protocol(honest(ProtocolKind::Base, 1000, 90));
  const SiftedKey key = sift(t);
  const double total = 8000.0;
  CHECK(std::abs(key.bits.size() / total - 0.25) <
        testutil::binom_4sigma(0.25, total));
  REQUIRE(key.bits.size() == key.source_rounds.size());
  // Sifted bits from honest runs are balanced.
  const double ones =
      std::count(key.bits.begin(), key.bits.end(), 1) /
      static_cast<double>(key.bits.size());
  CHECK(std::abs(ones - 0.5) <
        testutil::binom_4sigma(0.5, static_cast<double>(key.bits.size())));
}

TEST_CASE("sifting an empty transcript") {
  Transcript t;
  t.config.n = 1;
  CHECK(sift(t).bits.empty());
}

TEST_CASE("improved sifted bits encode the sigma_z choice") {
  const Transcript t = run_protocol(honest(ProtocolKind::Improved, 500, 91));
  const SiftedKey key = sift(t);
  REQUIRE(!key.bits.empty());
  for (std::size_t i = 0; i < key.bits.size(); ++i) {
    const RoundRecord& r = t.rounds[key.source_rounds[i]];
    CHECK(key.bits[i] == (*r.bob.sigma_z ? 0 : 1));
  }
}

TEST_CASE("honest runs pass the checks") {
  const Transcript t = run_protocol(honest(ProtocolKind::Base, 500, 92));
  const CheckReport report = estimate_and_decide(t, 0.02);
  REQUIRE(report.case1_error_rate.has_value());
  CHECK(*report.case1_error_rate == 0.0);
  CHECK(report.case2_mismatch_count == 0);
  CHECK(report.discovered_mismatch_count == 0);
  CHECK(!report.abort);
  CHECK_THROWS_AS(estimate_and_decide(t, 1.5), std::invalid_argument);
}

TEST_CASE("disclosure samples distinct positions at the configured rate") {
  const Transcript t = run_protocol(honest(ProtocolKind::Base, 500, 93));
  const CheckReport report = estimate_and_decide(t, 0.02);
  const KeyCandidates cand = key_candidates(t);
  CHECK(report.disclosed_count ==
        static_cast<std::uint64_t>(cand.rounds.size() / 2));
  std::set<int> unique(report.case2_disclosed_indices.begin(),
                       report.case2_disclosed_indices.end());
  CHECK(unique.size() == report.case2_disclosed_indices.size());
  for (int pos : unique) {
    CHECK(pos >= 0);
    CHECK(pos < static_cast<int>(cand.rounds.size()));
  }
  // Disclosed positions never reach the final key.
  const std::vector<int> final_bits = final_key_source(cand, report);
  CHECK(final_bits.size() == cand.rounds.size() - report.disclosed_count);
}

TEST_CASE("mismatches are found only through disclosure") {
  std::vector<std::pair<int, int>> bits;
  for (int i = 0; i < 400; ++i) {
    bits.push_back(i % 4 == 0 ? std::make_pair(0, 1)
                              : std::make_pair(i % 2, i % 2));
  }
  const Transcript t = synthetic_candidates(bits, 0.5, 1234);
  const CheckReport report = estimate_and_decide(t, 0.02);
  CHECK(!report.case1_error_rate.has_value());  // no check rounds at all
  CHECK(report.case2_mismatch_count == 100);
  CHECK(report.disclosed_count == 200);
  // Discovery rate tracks the underlying 25% mismatch rate.
  CHECK(report.discovered_mismatch_count > 20);
  CHECK(report.discovered_mismatch_count < 80);
  CHECK(report.abort);  // decided on disclosed mismatches alone

  // The sifted key and final key skip every mismatched candidate.
  const SiftedKey sifted = sift(t);
  CHECK(sifted.bits.size() == 300);
  const std::vector<int> final_bits =
      final_key_source(key_candidates(t), report);
  for (std::size_t i = 0; i < final_bits.size(); ++i) {
    CHECK((final_bits[i] == 0 || final_bits[i] == 1));
  }
}

TEST_CASE("zero disclosure keeps everything") {
  const Transcript t = synthetic_candidates({{0, 0}, {1, 1}, {0, 0}}, 0.0, 7);
  const CheckReport report = estimate_and_decide(t, 0.02);
  CHECK(report.disclosed_count == 0);
  CHECK(!report.abort);
  CHECK(final_key_source(key_candidates(t), report).size() == 3);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.11) ==
        doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}

TEST_CASE("key rate estimate") {
  CHECK(key_rate_estimate(0.0, 0.0) == 1.0);
  CHECK(key_rate_estimate(0.0, 1.0) == 0.0);
  CHECK(key_rate_estimate(0.05, 0.2) ==
        doctest::Approx(0.5136030428840437).epsilon(1e-12));
  CHECK_THROWS_AS(key_rate_estimate(0.6, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(key_rate_estimate(0.1, -0.1), std::invalid_argument);

  // Nonincreasing in both arguments across a grid.
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double q = 0.5 * i / 19.0;
      const double e = j / 19.0;
      if (i > 0) {
        CHECK(key_rate_estimate(q, e) <=
              key_rate_estimate(0.5 * (i - 1) / 19.0, e) + 1e-12);
      }
      if (j > 0) {
        CHECK(key_rate_estimate(q, e) <=
              key_rate_estimate(q, (j - 1) / 19.0) + 1e-12);
      }
    }
  }
}

TEST_CASE("toeplitz hashing against the naive oracle") {
  RandomStream rng(94, StreamDomain::Test, 0);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
      {1, 1}, {5, 3}, {64, 32}, {65, 64}, {200, 100}, {130, 1}};
  for (const auto& [in_len, out_len] : shapes) {
    const std::vector<int> bits = random_bits(in_len, rng);
    std::vector<std::uint8_t> diag(out_len + in_len - 1);
    for (auto& d : diag) d = rng.coin() ? 1 : 0;
    CHECK(toeplitz_hash(bits, out_len, diag) ==
          toeplitz_naive(bits, out_len, diag));
  }
}

TEST_CASE("identity-diagonal toeplitz returns the input prefix") {
  const std::vector<int> bits = {1, 0, 1, 1, 0, 0, 1};
  const std::size_t out_len = 4;
  std::vector<std::uint8_t> diag(out_len + bits.size() - 1, 0);
  diag[bits.size() - 1] = 1;  // T[i][j] = 1 iff i == j
  const std::vector<int> out = toeplitz_hash(bits, out_len, diag);
  CHECK(out == std::vector<int>{1, 0, 1, 1});
}

TEST_CASE("privacy amplification basics") {
  RandomStream rng(95, StreamDomain::Test, 0);
  const std::vector<int> bits = random_bits(100, rng);
  CHECK(privacy_amplification(bits, 0, 5).bits.empty());
  CHECK_THROWS_AS(privacy_amplification(bits, 101, 5),
                  std::invalid_argument);

  const KeyMaterial a = privacy_amplification(bits, 60, 5);
  const KeyMaterial b = privacy_amplification(bits, 60, 5);
  CHECK(a.bits == b.bits);
  CHECK(a.pa_seed == 5);
  const KeyMaterial c = privacy_amplification(bits, 60, 6);
  CHECK(a.bits != c.bits);
}

TEST_CASE("privacy amplification is linear over GF(2)") {
  RandomStream rng(96, StreamDomain::Test, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const std::vector<int> x = random_bits(120, rng);
    const std::vector<int> y = random_bits(120, rng);
    std::vector<int> xy(120);
    for (int i = 0; i < 120; ++i) xy[i] = x[i] ^ y[i];
    const std::vector<int> hx = privacy_amplification(x, 50, 9).bits;
    const std::vector<int> hy = privacy_amplification(y, 50, 9).bits;
    const std::vector<int> hxy = privacy_amplification(xy, 50, 9).bits;
    for (int i = 0; i < 50; ++i) {
      CHECK(hxy[i] == (hx[i] ^ hy[i]));
    }
  }
}

TEST_CASE("single-bit input difference flips the matching column") {
  RandomStream rng(97, StreamDomain::Test, 0);
  const std::size_t n = 40, out_len = 20, j = 17;
  const std::vector<int> x = random_bits(n, rng);
  std::vector<int> y = x;
  y[j] ^= 1;
  std::vector<std::uint8_t> diag(out_len + n - 1);
  for (auto& d : diag) d = rng.coin() ? 1 : 0;
  const std::vector<int> hx = toeplitz_hash(x, out_len, diag);
  const std::vector<int> hy = toeplitz_hash(y, out_len, diag);
  for (std::size_t i = 0; i < out_len; ++i) {
    CHECK((hx[i] ^ hy[i]) == diag[i + n - 1 - j]);
  }
}

TEST_CASE("qubit efficiency of honest runs") {
  SUBCASE("base, final over prepared, near 1/12") {
    const Transcript t = run_protocol(honest(ProtocolKind::Base, 1000, 98));
    const CheckReport check = estimate_and_decide(t, 0.02);
    const EfficiencyReport eff = qubit_efficiency(
        t, check, EfficiencyConvention::FinalOverPrepared);
    CHECK(std::abs(eff.eta - 1.0 / 12.0) < 0.1 / 12.0);
    // m = 8n TP preparations plus Alice's re-preparations.
    CHECK(eff.prepared_total > 8000u);
    CHECK(eff.prepared_total < 16000u);
  }
  SUBCASE("improved, final over prepared, near 1/12") {
    const Transcript t =
        run_protocol(honest(ProtocolKind::Improved, 1000, 99));
    const CheckReport check = estimate_and_decide(t, 0.02);
    const EfficiencyReport eff = qubit_efficiency(
        t, check, EfficiencyConvention::FinalOverPrepared);
    CHECK(std::abs(eff.eta - 1.0 / 12.0) < 0.1 / 12.0);
  }
  SUBCASE("krawec_ref, raw over prepared, near 1/24") {
    const Transcript t =
        run_protocol(honest(ProtocolKind::KrawecRef, 1000, 100));
    const CheckReport check = estimate_and_decide(t, 0.02);
    const EfficiencyReport eff =
        qubit_efficiency(t, check, EfficiencyConvention::RawOverPrepared);
    CHECK(std::abs(eff.eta - 1.0 / 24.0) < 0.15 / 24.0);
  }
}

TEST_CASE("key digest is stable and input-sensitive") {
  const std::vector<int> bits = {1, 0, 1};
  CHECK(key_digest(bits) == key_digest(bits));
  CHECK(key_digest(bits).size() == 16);
  CHECK(key_digest(bits) != key_digest({1, 0, 0}));
  CHECK(key_digest({}) != key_digest({0}));
}
