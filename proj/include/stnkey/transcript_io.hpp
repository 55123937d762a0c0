#pragma once

#include <string>

#include "stnkey/chainsim.hpp"

namespace stnkey {

/// Serializes a transcript for debugging. Field names follow ChainTranscript;
/// every bit string is an object {"len": bit count, "hex": lowercase hex of
/// the LSB-first byte packing}. Mask/string positions are 0-based internally;
/// abort_link is reported 1-based (0 = no abort) to match the node numbering
/// used in reports.
std::string transcript_to_json(const ChainTranscript& transcript, int indent = 2);

}  // namespace stnkey
