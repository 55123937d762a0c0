#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stnkey/bitmath.hpp"
#include "stnkey/params.hpp"
#include "stnkey/rates.hpp"
#include "stnkey/sampling.hpp"

namespace stnkey {

enum class AbortPolicy {
  strict,        ///< abort when any link's sifted or per-basis count is short
  observe_only,  ///< record the shortfall but keep running
};

struct SimConfig {
  ProtocolParams params;
  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  AbortPolicy abort_policy = AbortPolicy::strict;

  /// Throws guard_error when N exceeds the desk-scale limit of 1e7.
  void validate() const;
};

struct LinkRecord {
  BitString sift_mask;       ///< N bits; 1 marks a kept (basis-agreeing) round
  std::uint64_t sifted_len;  ///< N^i
  std::uint64_t z_count;     ///< n^i
  std::uint64_t x_count;     ///< m^i
};

/// One simulated establishment across the chain.
struct ChainTranscript {
  std::uint64_t trial = 0;
  std::vector<LinkRecord> links;        // p+1 entries
  std::uint64_t n0_obs = 0;             // min_i n^i
  std::uint64_t m0_obs = 0;             // min_i m^i
  std::vector<BitString> z_parities;    // node i's Z parity, i = 1..p
  std::vector<BitString> x_parities;    // node i's X parity
  BitString alice_raw_key;              // first n0_obs Z bits sent on link 0
  BitString alice_test;                 // first m0_obs X bits sent on link 0
  BitString bob_folded_key;             // Bob's Z data XOR all Z parities
  BitString bob_folded_test;            // Bob's X data XOR all X parities
  double w_obs = 0.0;                   // relative weight of the test XOR
  bool aborted = false;
  int abort_link = -1;                  // first offending link
  std::string abort_check;              // "sifted", "z-count" or "x-count"
};

/// Runs one establishment. Deterministic in (cfg.seed, trial); every link and
/// stage draws from its own derived stream.
ChainTranscript simulate_chain(const SimConfig& cfg, std::uint64_t trial);

struct DistillLedger {
  KeyRateResult rate;     ///< closed-form result at the observed quantities
  double delta_obs = 0.0; ///< deviation recomputed from n0_obs/m0_obs
  double w_obs = 0.0;
  std::uint64_t n0_obs = 0;
  std::uint64_t m0_obs = 0;
};

struct DistillResult {
  BitString alice_key;
  BitString bob_key;
  DistillLedger ledger;
  bool feasible = false;  ///< false: zero-length key, outputs empty
};

/// Idealized error correction (copy plus leakage ledger) followed by Toeplitz
/// privacy amplification to the closed-form length. Throws
/// aborted_transcript_error on an aborted transcript.
DistillResult distill_key(const ChainTranscript& transcript, const ProtocolParams& params,
                          std::uint64_t seed, double ec_efficiency = 1.0);

/// Odd-parity frequency of p+1 independent Bernoulli(Q) links; the seeded
/// Monte Carlo counterpart of stn_total_noise.
McEstimate estimate_total_noise_mc(double link_noise, std::uint32_t stn_count,
                                   std::uint64_t trials, std::uint64_t seed);

}  // namespace stnkey
