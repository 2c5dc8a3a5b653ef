#pragma once

#include <string>

#include "json.hpp"
#include "lockwork/flows.hpp"
#include "lockwork/lockers.hpp"

namespace lockwork {

/// Stable report schema: flow, scheme, pslt_family, bits[], provenance[],
/// dip_count, query_count, cegar_iterations, stage_times_ms, verification,
/// plus key_names[], pslt_technique, critical_gate, qbf_status,
/// oracle_check, error and diagnostic (null when absent).
nlohmann::json report_json(const AttackReport& r);

/// Sidecar record of a lock: secret, labels, technique pair, seed.
nlohmann::json truth_json(const GroundTruth& t);
GroundTruth truth_from_json(const nlohmann::json& j);

/// Key bits as hex, bit i of the number = key index i.
std::string key_hex(const std::vector<bool>& bits);
/// Inverse of key_hex for `width` bits; throws PreconditionError.
std::vector<bool> parse_key_hex(const std::string& hex, std::size_t width);

}  // namespace lockwork
