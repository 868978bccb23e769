/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/postprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "masqkd/rng.hpp"

namespace masqkd {

KeyCandidates key_candidates(const Transcript& transcript) {
  KeyCandidates c;
  for (const RoundRecord& r : transcript.rounds) {
    if (r.alice_key_bit && r.bob_key_bit) {
      c.rounds.push_back(r.round_index);
      c.alice_bits.push_back(*r.alice_key_bit);
      c.bob_bits.push_back(*r.bob_key_bit);
    }
  }
  return c;
}

SiftedKey sift(const Transcript& transcript) {
  SiftedKey key;
  const KeyCandidates c = key_candidates(transcript);
  for (std::size_t i = 0; i < c.rounds.size(); ++i) {
    if (c.alice_bits[i] == c.bob_bits[i]) {
      key.bits.push_back(c.alice_bits[i]);
      key.source_rounds.push_back(c.rounds[i]);
    }
  }
  return key;
}

CheckReport estimate_and_decide(const Transcript& transcript,
                                double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw std::invalid_argument("threshold must lie in [0,1]");
  }
  CheckReport report;
  report.threshold = threshold;

  for (const RoundRecord& r : transcript.rounds) {
    if (r.round_case == RoundCase::Case1) {
      ++report.case1_rounds;
      if (r.check_error) ++report.case1_errors;
    }
  }
  if (report.case1_rounds > 0) {
    report.case1_error_rate = static_cast<double>(report.case1_errors) /
                              static_cast<double>(report.case1_rounds);
  }

  const KeyCandidates c = key_candidates(transcript);
  for (std::size_t i = 0; i < c.rounds.size(); ++i) {
    if (c.alice_bits[i] != c.bob_bits[i]) ++report.case2_mismatch_count;
  }

  // Partial Fisher-Yates over candidate positions, keyed by the run seed.
  const std::size_t total = c.rounds.size();
  const std::size_t disclose = static_cast<std::size_t>(
      std::floor(transcript.config.disclosure_fraction *
                 static_cast<double>(total)));
  RandomStream rng(transcript.config.seed, StreamDomain::Disclosure, 0);
  std::vector<int> positions(total);
  std::iota(positions.begin(), positions.end(), 0);
  for (std::size_t i = 0; i < disclose; ++i) {
    const std::size_t j =
        i + rng.below(static_cast<std::uint32_t>(total - i));
    std::swap(positions[i], positions[j]);
  }
  report.case2_disclosed_indices.assign(positions.begin(),
                                        positions.begin() + disclose);
  std::sort(report.case2_disclosed_indices.begin(),
            report.case2_disclosed_indices.end());
  report.disclosed_count = disclose;
  for (int pos : report.case2_disclosed_indices) {
    if (c.alice_bits[pos] != c.bob_bits[pos]) {
      ++report.discovered_mismatch_count;
    }
  }

  const bool case1_bad =
      report.case1_error_rate && *report.case1_error_rate > threshold;
  const bool case2_bad =
      report.disclosed_count > 0 && report.qber_estimate() > threshold;
  report.abort = case1_bad || case2_bad;
  return report;
}

std::vector<int> final_key_source(const KeyCandidates& candidates,
                                  const CheckReport& check) {
  std::vector<bool> disclosed(candidates.rounds.size(), false);
  for (int pos : check.case2_disclosed_indices) {
    disclosed[pos] = true;
  }
  std::vector<int> bits;
  for (std::size_t i = 0; i < candidates.rounds.size(); ++i) {
    if (!disclosed[i] && candidates.alice_bits[i] == candidates.bob_bits[i]) {
      bits.push_back(candidates.alice_bits[i]);
    }
  }
  return bits;
}

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("binary_entropy: q must lie in [0,1]");
  }
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double key_rate_estimate(double qber, double eve_info_bits) {
  if (!(qber >= 0.0 && qber <= 0.5)) {
    throw std::invalid_argument("key_rate_estimate: qber must lie in [0,0.5]");
  }
  if (!(eve_info_bits >= 0.0)) {
    throw std::invalid_argument("key_rate_estimate: eve_info_bits < 0");
  }
  return std::max(0.0, (1.0 - binary_entropy(qber)) - eve_info_bits);
}

namespace {

std::vector<std::uint64_t> pack_bits_lsb(const std::vector<int>& bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return words;
}

std::vector<std::uint64_t> pack_bytes_lsb(
    const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return words;
}

}  // namespace

std::vector<int> toeplitz_hash(const std::vector<int>& bits,
                               std::size_t out_len,
                               const std::vector<std::uint8_t>& diag_bits) {
  const std::size_t in_len = bits.size();
  if (out_len > in_len) {
    throw std::invalid_argument("toeplitz_hash: out_len exceeds input length");
  }
  if (out_len == 0) return {};
  if (diag_bits.size() != out_len + in_len - 1) {
    throw std::invalid_argument("toeplitz_hash: wrong diagonal bit count");
  }

  // Row i of T reads diag_bits at index (i + in_len - 1 - j). Reversing the
  // diagonal sequence turns every row into a contiguous window: with
  // R[m] = diag_bits[out_len + in_len - 2 - m], row i is
  // R[out_len - 1 - i .. +in_len), so each output bit is the parity of a
  // shifted AND against the packed input.
  std::vector<std::uint8_t> reversed(diag_bits.rbegin(), diag_bits.rend());
  const std::vector<std::uint64_t> r_words = pack_bytes_lsb(reversed);
  const std::vector<std::uint64_t> x_words = pack_bits_lsb(bits);

  auto window_word = [&](std::size_t start_bit,
                         std::size_t w) -> std::uint64_t {
    const std::size_t bit = start_bit + 64 * w;
    const std::size_t word = bit / 64;
    const unsigned shift = bit % 64;
    std::uint64_t v = word < r_words.size() ? r_words[word] >> shift : 0;
    if (shift != 0 && word + 1 < r_words.size()) {
      v |= r_words[word + 1] << (64 - shift);
    }
    return v;
  };

  std::vector<int> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::size_t start = out_len - 1 - i;
    int parity = 0;
    for (std::size_t w = 0; w < x_words.size(); ++w) {
      parity ^= std::popcount(window_word(start, w) & x_words[w]) & 1;
    }
    out[i] = parity;
  }
  return out;
}

KeyMaterial privacy_amplification(const std::vector<int>& bits,
                                  std::size_t out_len, std::uint64_t seed) {
  if (out_len > bits.size()) {
    throw std::invalid_argument(
        "privacy_amplification: out_len exceeds input length");
  }
  KeyMaterial km;
  km.pa_seed = seed;
  if (out_len == 0) return km;

  const std::size_t count = out_len + bits.size() - 1;
  std::vector<std::uint8_t> diag(count);
  RandomStream rng(seed, StreamDomain::PrivacyAmp, 0);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    diag[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1);
  }
  km.bits = toeplitz_hash(bits, out_len, diag);
  return km;
}

EfficiencyReport qubit_efficiency(const Transcript& transcript,
                                  const CheckReport& check,
                                  EfficiencyConvention convention) {
  EfficiencyReport report;
  report.convention = convention;
  for (const RoundRecord& r : transcript.rounds) {
    report.prepared_total += static_cast<std::uint64_t>(r.prepared_count);
  }
  const std::uint64_t sifted = sift(transcript).bits.size();
  if (convention == EfficiencyConvention::RawOverPrepared) {
    report.key_bits = sifted;
  } else {
    report.key_bits =
        sifted > check.disclosed_count ? sifted - check.disclosed_count : 0;
  }
  report.eta = static_cast<double>(report.key_bits) /
               static_cast<double>(report.prepared_total);
  return report;
}

std::string key_digest(const std::vector<int>& bits) {
  std::uint64_t h = 1469598103934665603ULL;
  auto fnv = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  const std::uint64_t len = bits.size();
  for (int i = 0; i < 8; ++i) {
    fnv(static_cast<std::uint8_t>(len >> (8 * i)));
  }
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    acc = static_cast<std::uint8_t>((acc << 1) | (bits[i] & 1));
    if (i % 8 == 7) {
      fnv(acc);
      acc = 0;
    }
  }
  if (bits.size() % 8 != 0) fnv(acc);

  std::ostringstream hex;
  for (int i = 15; i >= 0; --i) {
    hex << "0123456789abcdef"[(h >> (4 * i)) & 0xF];
  }
  return hex.str();
}

}  // namespace masqkd
