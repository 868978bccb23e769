/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_POSTPROCESS_HPP_
#define MASQKD_POSTPROCESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "masqkd/protocol.hpp"

namespace masqkd {

//============================================================================
// Sifting and checking
//
// Two views of the key rounds coexist. The parties' view ("candidates") is
// every round their public discussion marks as a key round; under attack
// their bits can disagree there without either side knowing. The ground
// truth view ("sifted key") keeps only candidates whose bits actually
// match. Disclosure samples candidate positions, so mismatches are
// discovered at the protocol-visible rate, while reports also carry the
// true mismatch count.
//============================================================================

/// The parties' raw-key view: one entry per round both sides would include
/// in their raw key (key case; for the reference protocol, TP message -1).
struct KeyCandidates {
  std::vector<int> rounds;
  std::vector<int> alice_bits;
  std::vector<int> bob_bits;
};

KeyCandidates key_candidates(const Transcript& transcript);

/// Matching candidate bits, in round order.
struct SiftedKey {
  std::vector<int> bits;
  std::vector<int> source_rounds;
};

SiftedKey sift(const Transcript& transcript);

struct CheckReport {
  std::optional<double> case1_error_rate;  // absent when no check rounds
  std::uint64_t case1_rounds = 0;
  std::uint64_t case1_errors = 0;
  std::vector<int> case2_disclosed_indices;  // positions in the candidate list
  std::uint64_t case2_mismatch_count = 0;    // ground truth, all candidates
  std::uint64_t discovered_mismatch_count = 0;  // among disclosed positions
  std::uint64_t disclosed_count = 0;
  double threshold = 0.0;
  bool abort = false;

  /// Mismatch fraction among disclosed bits (the rate the parties see).
  double qber_estimate() const {
    return disclosed_count == 0
               ? 0.0
               : static_cast<double>(discovered_mismatch_count) /
                     static_cast<double>(disclosed_count);
  }
};

/// Case-1 error rate, seeded disclosure of floor(disclosure_fraction * C)
/// distinct candidate positions, and the abort decision: abort when either
/// the check-round error rate or the disclosed mismatch rate exceeds the
/// threshold. Disclosure sampling is keyed by the config seed.
CheckReport estimate_and_decide(const Transcript& transcript,
                                double threshold);

/// Bits that survive into the final key: candidate positions that were not
/// disclosed and whose bits match.
std::vector<int> final_key_source(const KeyCandidates& candidates,
                                  const CheckReport& check);

//============================================================================
// Key-rate arithmetic and privacy amplification
//============================================================================

/// h(q) = -q log2 q - (1-q) log2 (1-q); 0 at the endpoints.
double binary_entropy(double q);

/// max(0, (1 - h(qber)) - eve_info_bits): the binary-symmetric-channel
/// mutual information between the parties minus the adversary's bound.
double key_rate_estimate(double qber, double eve_info_bits);

struct KeyMaterial {
  std::vector<int> bits;
  std::uint64_t pa_seed = 0;
};

/// Multiplies the bit vector by an out_len x in_len Toeplitz matrix over
/// GF(2) whose diagonal bit sequence (out_len + in_len - 1 bits,
/// T[i][j] = t[i - j + in_len - 1]) is given explicitly. Exposed so tests
/// can pin specific matrices (e.g. identity rows).
std::vector<int> toeplitz_hash(const std::vector<int>& bits,
                               std::size_t out_len,
                               const std::vector<std::uint8_t>& diag_bits);

/// Seeded Toeplitz hashing: the diagonal bits come from the PrivacyAmp
/// stream of `seed`. Deterministic in (bits, out_len, seed).
KeyMaterial privacy_amplification(const std::vector<int>& bits,
                                  std::size_t out_len, std::uint64_t seed);

//============================================================================
// Efficiency accounting
//============================================================================

struct EfficiencyReport {
  std::uint64_t prepared_total = 0;  // m: qubits prepared by all parties
  std::uint64_t key_bits = 0;        // n_key under the chosen convention
  EfficiencyConvention convention = EfficiencyConvention::FinalOverPrepared;
  double eta = 0.0;
};

/// eta = n_key / m with m = sum of per-round prepared counts and n_key the
/// sifted length (RawOverPrepared) or sifted length minus disclosed bits
/// (FinalOverPrepared).
EfficiencyReport qubit_efficiency(const Transcript& transcript,
                                  const CheckReport& check,
                                  EfficiencyConvention convention);

/// Stable FNV-1a 64-bit fingerprint of a bit string, as 16 hex digits.
std::string key_digest(const std::vector<int>& bits);

}  // namespace masqkd

#endif  // MASQKD_POSTPROCESS_HPP_
