#include "lockwork/report.hpp"

#include <cctype>

#include "lockwork/error.hpp"

namespace lockwork {

using nlohmann::json;

namespace {

template <class T, class F>
json opt_name(const std::optional<T>& v, F name) {
  return v ? json(name(*v)) : json(nullptr);
}

}  // namespace

json report_json(const AttackReport& r) {
  json bits = json::array(), prov = json::array();
  for (std::size_t i = 0; i < r.key.names.size(); ++i) {
    bits.push_back(r.key.bits[i] ? json(*r.key.bits[i] ? 1 : 0) : json("x"));
    prov.push_back(provenance_name(r.key.provenance[i]));
  }
  return json{
      {"flow", flow_name(r.flow)},
      {"scheme", scheme_name(r.scheme)},
      {"pslt_family", opt_name(r.family, family_name)},
      {"pslt_technique", opt_name(r.technique, pslt_technique_name)},
      {"critical_gate", r.critical_gate ? json(*r.critical_gate) : json(nullptr)},
      {"qbf_status", opt_name(r.qbf_status, qbf_status_name)},
      {"key_names", r.key.names},
      {"bits", bits},
      {"provenance", prov},
      {"key", r.key.to_string()},
      {"dip_count", r.dip_count},
      {"query_count", r.query_count},
      {"cegar_iterations", r.cegar_iterations},
      {"stage_times_ms", r.stage_times_ms},
      {"verification", verification_name(r.verification)},
      {"oracle_check", r.oracle_check ? json(*r.oracle_check) : json(nullptr)},
      {"error", r.error ? json(*r.error) : json(nullptr)},
      {"diagnostic", r.diagnostic},
  };
}

json truth_json(const GroundTruth& t) {
  json secret = json::object(), labels = json::object();
  for (auto& [k, v] : t.secret) secret[k] = v ? 1 : 0;
  for (auto& [k, l] : t.labels) labels[k] = label_name(l);
  return json{{"secret", secret},
              {"labels", labels},
              {"rll", t.has_rll},
              {"psll", t.psll ? json(technique_name(*t.psll)) : json(nullptr)},
              {"cg_hint", t.cg_hint ? json(*t.cg_hint) : json(nullptr)},
              {"seed", t.seed}};
}

GroundTruth truth_from_json(const json& j) {
  GroundTruth t;
  try {
    for (auto& [k, v] : j.at("secret").items()) t.secret[k] = v.get<int>() != 0;
    for (auto& [k, v] : j.at("labels").items()) {
      auto s = v.get<std::string>();
      if (s == label_name(KeyLabel::Rll)) t.labels[k] = KeyLabel::Rll;
      else if (s == label_name(KeyLabel::Psll)) t.labels[k] = KeyLabel::Psll;
      else throw PreconditionError("unknown key label " + s);
    }
    t.has_rll = j.value("rll", false);
    if (j.contains("psll") && !j["psll"].is_null()) {
      auto p = parse_technique(j["psll"].get<std::string>());
      if (!p) throw PreconditionError("unknown technique in ground truth");
      t.psll = *p;
    }
    if (j.contains("cg_hint") && !j["cg_hint"].is_null()) t.cg_hint = j["cg_hint"].get<std::string>();
    t.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("bad ground-truth record: ") + e.what());
  }
  return t;
}

std::string key_hex(const std::vector<bool>& bits) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::size_t nib = (bits.size() + 3) / 4; nib-- > 0;) {
    int v = 0;
    for (int b = 3; b >= 0; --b) {
      std::size_t i = nib * 4 + static_cast<std::size_t>(b);
      v = v * 2 + (i < bits.size() && bits[i] ? 1 : 0);
    }
    s += digits[v];
  }
  return "0x" + (s.empty() ? std::string("0") : s);
}

std::vector<bool> parse_key_hex(const std::string& hex, std::size_t width) {
  std::string h = hex;
  if (h.size() >= 2 && h[0] == '0' && (h[1] == 'x' || h[1] == 'X')) h = h.substr(2);
  if (h.empty()) throw PreconditionError("empty key");
  std::vector<bool> bits(width, false);
  std::size_t pos = 0;
  for (auto it = h.rbegin(); it != h.rend(); ++it, pos += 4) {
    if (!std::isxdigit(static_cast<unsigned char>(*it))) throw PreconditionError("bad hex digit in key");
    int v = std::isdigit(static_cast<unsigned char>(*it)) ? *it - '0' : std::tolower(*it) - 'a' + 10;
    for (int b = 0; b < 4; ++b) {
      bool on = (v >> b) & 1;
      if (pos + b < width) bits[pos + b] = on;
      else if (on) throw PreconditionError("key has more than " + std::to_string(width) + " bits");
    }
  }
  return bits;
}

}  // namespace lockwork
