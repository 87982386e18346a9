#pragma once

#include <string>

#include <json.hpp>

#include "fairpool/axioms.hpp"
#include "fairpool/core.hpp"
#include "fairpool/schemes.hpp"

namespace fairpool {

// All output goes through ordered_json so that a given input always
// serializes to the same bytes.
using ordered_json = nlohmann::ordered_json;

ordered_json history_to_json(const History& h);

// Expects {"block_reward": "50", "fee": "1/2", "shares": [{"id", "time",
// "full"}, ...]}; numeric fields are rational strings (bare integers also
// accepted as JSON numbers). Structural problems raise IoError, semantic ones
// (unparseable rational, bad ordering) raise ValidationError.
History history_from_json(const ordered_json& doc);

// Reads and parses a history file; IoError when the file cannot be opened or
// is not valid JSON.
History load_history_file(const std::string& path);

std::string format_double(double x, int significant_digits = 12);

// A single award value as text: rational by default, a 12-significant-digit
// decimal when `decimal` is set or the scheme only produces doubles.
std::string award_value_str(const Scheme& scheme, const Award& a, bool decimal);

ordered_json payout_to_json(const Scheme& scheme, const History& h, const PayoutReport& report,
                            bool decimal);
std::string render_payout_text(const Scheme& scheme, const History& h, const PayoutReport& report,
                               bool decimal);

ordered_json witness_to_json(const Witness& w);
ordered_json verdict_to_json(const Scheme& scheme, const Verdict& v);
std::string render_verdict_text(const Scheme& scheme, const Verdict& v);

}  // namespace fairpool
