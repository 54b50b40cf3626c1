#pragma once

// JSON forms of the library types. Complex numbers are [re, im] pairs;
// matrices are row-major arrays of such pairs.

#include <json.hpp>
#include <string>

#include "dormant/analysis.hpp"
#include "dormant/channel.hpp"
#include "dormant/chsh.hpp"
#include "dormant/qsim.hpp"
#include "dormant/states.hpp"

namespace dormant {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const Unitary1Q& u);
/// Flat [re, im, re, im, ...] amplitude list.
Json to_json(const StateVector& s);
Json to_json(const DensityMatrix& rho);
Json to_json(const ActivationTable& table);
Json to_json(const CorrelationReport& report);
Json to_json(const CHSHResult& result, const CHSHSetting& setting);
Json to_json(const SweepSummary& summary);
Json to_json(const ResourcePlan& plan);
Json to_json(const ClassicalMessage& msg);

/// Per-message records followed by one final record.
Json transcript_records(const ChannelSession& session);
/// The same records, one compact JSON object per line.
std::string transcript_jsonl(const ChannelSession& session);

/// Flattens nested objects/arrays into dotted keys ("a.b.0").
Json flatten(const Json& j);
/// Header row plus one value row.
std::string to_csv(const Json& j);

}  // namespace dormant
