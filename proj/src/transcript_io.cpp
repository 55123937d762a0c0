#include "stnkey/transcript_io.hpp"

#include <json.hpp>

namespace stnkey {

namespace {

nlohmann::json bits_json(const BitString& b) {
  return {{"len", b.size()}, {"hex", b.to_hex()}};
}

}  // namespace

std::string transcript_to_json(const ChainTranscript& t, int indent) {
  nlohmann::json j;
  j["trial"] = t.trial;
  j["links"] = nlohmann::json::array();
  for (const auto& l : t.links) {
    j["links"].push_back({{"sift_mask", bits_json(l.sift_mask)},
                          {"sifted_len", l.sifted_len},
                          {"z_count", l.z_count},
                          {"x_count", l.x_count}});
  }
  j["n0_obs"] = t.n0_obs;
  j["m0_obs"] = t.m0_obs;
  j["z_parities"] = nlohmann::json::array();
  for (const auto& p : t.z_parities) j["z_parities"].push_back(bits_json(p));
  j["x_parities"] = nlohmann::json::array();
  for (const auto& p : t.x_parities) j["x_parities"].push_back(bits_json(p));
  j["alice_raw_key"] = bits_json(t.alice_raw_key);
  j["alice_test"] = bits_json(t.alice_test);
  j["bob_folded_key"] = bits_json(t.bob_folded_key);
  j["bob_folded_test"] = bits_json(t.bob_folded_test);
  j["w_obs"] = t.w_obs;
  j["aborted"] = t.aborted;
  j["abort_link"] = t.aborted ? t.abort_link + 1 : 0;
  j["abort_check"] = t.abort_check;
  return j.dump(indent);
}

}  // namespace stnkey
