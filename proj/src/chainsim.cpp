#include "stnkey/chainsim.hpp"

#include <algorithm>
#include <cmath>

#include "stnkey/errors.hpp"
#include "stnkey/rng.hpp"
#include "stnkey/toeplitz.hpp"

namespace stnkey {

namespace {

constexpr std::uint64_t kMaxSimSignals = 10'000'000;

// Stream tags: one independent generator per (trial, link, stage).
enum Stage : std::uint64_t {
  kStageBasisSender = 1,
  kStageBasisReceiver = 2,
  kStageData = 3,
  kStageNoise = 4,
  kStagePrivacyAmp = 5,
};

struct LinkData {
  LinkRecord record;
  BitString sender_z, sender_x;      // data the left node sent, per basis
  BitString receiver_z, receiver_x;  // data the right node measured
};

LinkData simulate_link(const SimConfig& cfg, std::uint64_t trial, std::uint64_t link) {
  const std::uint64_t n = cfg.params.n_signals;
  const double px = cfg.params.px;
  const double q = cfg.params.link_noise;

  Rng basis_s = Rng::stream(cfg.seed, trial, link, kStageBasisSender);
  Rng basis_r = Rng::stream(cfg.seed, trial, link, kStageBasisReceiver);
  Rng data = Rng::stream(cfg.seed, trial, link, kStageData);
  Rng noise = Rng::stream(cfg.seed, trial, link, kStageNoise);

  LinkData out;
  out.record.sift_mask = BitString(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const bool sx = basis_s.bernoulli(px);
    const bool rx = basis_r.bernoulli(px);
    if (sx != rx) continue;  // basis mismatch, round discarded
    out.record.sift_mask.set_bit(i, true);
    const bool sent = data.bernoulli(0.5);
    const bool flipped = noise.bernoulli(q);
    if (sx) {
      out.sender_x.push_back(sent);
      out.receiver_x.push_back(sent ^ flipped);
    } else {
      out.sender_z.push_back(sent);
      out.receiver_z.push_back(sent ^ flipped);
    }
  }
  out.record.z_count = out.sender_z.size();
  out.record.x_count = out.sender_x.size();
  out.record.sifted_len = out.record.z_count + out.record.x_count;
  return out;
}

BitString parity_string(const BitString& left, const BitString& right) {
  const std::size_t len = std::min(left.size(), right.size());
  return left.prefix(len) ^ right.prefix(len);
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (params.n_signals > kMaxSimSignals)
    throw guard_error("SimConfig: N above the 1e7 simulation guard");
  if (trials < 1) throw guard_error("SimConfig: trials must be >= 1");
}

ChainTranscript simulate_chain(const SimConfig& cfg, std::uint64_t trial) {
  cfg.validate();
  const std::uint32_t p = cfg.params.stn_count;
  const std::uint64_t n_links = static_cast<std::uint64_t>(p) + 1;

  std::vector<LinkData> links;
  links.reserve(n_links);
  for (std::uint64_t i = 0; i < n_links; ++i) links.push_back(simulate_link(cfg, trial, i));

  ChainTranscript t;
  t.trial = trial;
  t.links.reserve(n_links);
  t.n0_obs = links.front().record.z_count;
  t.m0_obs = links.front().record.x_count;
  for (const auto& l : links) {
    t.links.push_back(l.record);
    t.n0_obs = std::min(t.n0_obs, l.record.z_count);
    t.m0_obs = std::min(t.m0_obs, l.record.x_count);
  }

  // Abort checks against the pre-protocol floor sizes.
  DerivedSizes sizes{};
  bool have_sizes = true;
  try {
    sizes = derive_sizes(cfg.params);
  } catch (const infeasible_error&) {
    have_sizes = false;  // observe-only runs may use parameters with no floor
  }
  if (have_sizes) {
    for (std::uint64_t i = 0; i < n_links; ++i) {
      const auto& r = links[i].record;
      std::string check;
      if (static_cast<double>(r.sifted_len) < sizes.n_tilde)
        check = "sifted";
      else if (r.z_count < sizes.n0)
        check = "z-count";
      else if (r.x_count < sizes.m0)
        check = "x-count";
      if (!check.empty()) {
        t.aborted = true;
        t.abort_link = static_cast<int>(i);
        t.abort_check = check;
        break;
      }
    }
  }
  if (t.aborted && cfg.abort_policy == AbortPolicy::strict) return t;

  // Node i holds the receiver side of link i-1 ("left") and the sender side
  // of link i ("right"); its broadcast is the XOR of the two, truncated to
  // the shorter one.
  for (std::uint32_t node = 1; node <= p; ++node) {
    t.z_parities.push_back(parity_string(links[node - 1].receiver_z, links[node].sender_z));
    t.x_parities.push_back(parity_string(links[node - 1].receiver_x, links[node].sender_x));
  }

  t.alice_raw_key = links.front().sender_z.prefix(t.n0_obs);
  t.alice_test = links.front().sender_x.prefix(t.m0_obs);

  BitString folded_z = links.back().receiver_z.prefix(t.n0_obs);
  BitString folded_x = links.back().receiver_x.prefix(t.m0_obs);
  for (std::uint32_t node = 0; node < p; ++node) {
    folded_z ^= t.z_parities[node].prefix(t.n0_obs);
    folded_x ^= t.x_parities[node].prefix(t.m0_obs);
  }
  t.bob_folded_key = std::move(folded_z);
  t.bob_folded_test = std::move(folded_x);

  t.w_obs = t.m0_obs > 0 ? relative_weight(t.alice_test ^ t.bob_folded_test) : 0.0;
  return t;
}

DistillResult distill_key(const ChainTranscript& transcript, const ProtocolParams& params,
                          std::uint64_t seed, double ec_efficiency) {
  if (transcript.aborted)
    throw aborted_transcript_error("distill_key: transcript ended in an abort");

  DistillResult out;
  out.ledger.w_obs = transcript.w_obs;
  out.ledger.n0_obs = transcript.n0_obs;
  out.ledger.m0_obs = transcript.m0_obs;
  out.ledger.delta_obs =
      sampling_deviation(static_cast<double>(transcript.m0_obs),
                         static_cast<double>(transcript.n0_obs), params.eps);
  out.ledger.rate =
      stn_key_length_from_counts(transcript.n0_obs, transcript.m0_obs, params.n_signals,
                                 transcript.w_obs, params.eps, ec_efficiency);

  const std::uint64_t l = out.ledger.rate.key_length_clamped;
  if (l == 0) {
    out.feasible = false;  // empty keys
    return out;
  }

  // Idealized error correction: Bob's corrected key is Alice's raw key; the
  // leakage is charged in the ledger rather than transmitted.
  const BitString& alice_corrected = transcript.alice_raw_key;
  const BitString& bob_corrected = transcript.alice_raw_key;

  const ToeplitzHash hash(l, transcript.n0_obs, mix_seed(seed, kStagePrivacyAmp));
  out.alice_key = hash.apply(alice_corrected);
  out.bob_key = hash.apply(bob_corrected);
  out.feasible = true;
  return out;
}

McEstimate estimate_total_noise_mc(double link_noise, std::uint32_t stn_count,
                                   std::uint64_t trials, std::uint64_t seed) {
  if (trials < 10'000)
    throw std::invalid_argument("estimate_total_noise_mc: need at least 1e4 trials");
  if (!(link_noise >= 0.0 && link_noise <= 0.5))
    throw std::domain_error("estimate_total_noise_mc: Q outside [0, 0.5]");

  const std::uint64_t n_links = static_cast<std::uint64_t>(stn_count) + 1;
  // Trials are grouped into fixed chunks with one derived stream each, so the
  // estimate stays reproducible if chunks ever run concurrently and the
  // engine setup cost is amortized over 2^16 trials.
  constexpr std::uint64_t kChunk = 65'536;
  std::uint64_t odd = 0;
  for (std::uint64_t chunk = 0; chunk * kChunk < trials; ++chunk) {
    Rng rng = Rng::stream(seed, chunk);
    const std::uint64_t end = std::min(trials, (chunk + 1) * kChunk);
    for (std::uint64_t trial = chunk * kChunk; trial < end; ++trial) {
      bool parity = false;
      for (std::uint64_t l = 0; l < n_links; ++l) parity ^= rng.bernoulli(link_noise);
      if (parity) ++odd;
    }
  }

  McEstimate est;
  est.trials = trials;
  est.failures = odd;
  est.fraction = static_cast<double>(odd) / static_cast<double>(trials);
  est.interval = wilson_interval(odd, trials);
  return est;
}

}  // namespace stnkey
