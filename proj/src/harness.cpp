#include "lockwork/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lockwork/bench.hpp"
#include "lockwork/error.hpp"
#include "lockwork/report.hpp"

namespace lockwork {

using nlohmann::json;

namespace {

void check_same_keys(const PartialKey& guess, const GroundTruth& truth) {
  if (guess.names.size() != truth.secret.size()) throw PreconditionError("guess and truth cover different keys");
  for (auto& n : guess.names)
    if (!truth.secret.count(n)) throw PreconditionError("key " + n + " missing from ground truth");
}

}  // namespace

Score score(const PartialKey& guess, const GroundTruth& truth) {
  check_same_keys(guess, truth);
  Score s;
  s.total_keys = guess.names.size();
  for (std::size_t i = 0; i < guess.names.size(); ++i) {
    if (!guess.bits[i]) continue;
    bool ok = *guess.bits[i] == truth.secret.at(guess.names[i]);
    ++s.dk;
    s.cdk += ok;
    if (guess.provenance[i] == Provenance::Proven) {
      ++s.prv;
      if (!ok) s.soundness_violation = true;
    }
  }
  return s;
}

Score score_functional(const PartialKey& guess, const GroundTruth& truth, const Netlist& locked,
                       const Netlist& original) {
  Score s = score(guess, truth);
  if (s.cdk == s.dk) return s;
  for (KeyLabel group : {KeyLabel::Rll, KeyLabel::Psll}) {
    Assignment candidate = truth.secret;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < guess.names.size(); ++i) {
      const auto& name = guess.names[i];
      auto l = truth.labels.find(name);
      if (!guess.bits[i] || l == truth.labels.end() || l->second != group) continue;
      if (*guess.bits[i] != truth.secret.at(name)) {
        // Proven bits get no functional credit.
        if (guess.provenance[i] == Provenance::Proven) {
          wrong = 0;
          break;
        }
        ++wrong;
        candidate[name] = *guess.bits[i];
      }
    }
    if (wrong == 0) continue;
    PartialKey full = PartialKey::unknown(locked);
    for (auto& [k, v] : candidate) full.set(k, v, Provenance::Verified);
    if (verify_key(locked, full, original) == Verification::LecPass) s.cdk += wrong;
  }
  return s;
}

std::string format_accuracy(const Score& s) {
  auto a = s.accuracy();
  if (!a) return "-";
  char buf[32];
  // Truncated, not rounded: 190/205 reads 92.6%.
  std::snprintf(buf, sizeof buf, "%.1f%%", std::floor(*a * 1000.0) / 10.0);
  return buf;
}

RunResult run_config(const RunConfig& c) {
  RunResult r;
  r.name = c.name;
  try {
    auto start = std::chrono::steady_clock::now();
    Netlist original = read_bench_file(c.circuit);
    Netlist locked;
    GroundTruth truth;
    if (c.locked) {
      locked = read_bench_file(*c.locked);
      if (!c.truth) throw PreconditionError("a locked circuit needs a ground-truth sidecar");
      std::ifstream in(*c.truth);
      if (!in) throw PreconditionError("cannot read " + *c.truth);
      truth = truth_from_json(json::parse(in));
    } else if (c.psll && c.rll_keys > 0) {
      auto lr = lock_compound(original, c.rll_keys, LockSpec{*c.psll, c.psll_width, c.seed, {}, 0.25}, c.seed);
      locked = std::move(lr.locked);
      truth = std::move(lr.truth);
    } else if (c.psll) {
      auto lr = lock(original, LockSpec{*c.psll, c.psll_width, c.seed, {}, 0.25});
      locked = std::move(lr.locked);
      truth = std::move(lr.truth);
    } else {
      if (c.rll_keys == 0) throw PreconditionError("run has no locking layer");
      auto lr = lock_rll(original, c.rll_keys, c.seed);
      locked = std::move(lr.locked);
      truth = std::move(lr.truth);
    }

    AttackReport report;
    if (c.flow == Flow::Og) {
      Oracle oracle(original);
      report = run_og_flow(locked, oracle, c.budgets);
      if (report.key.total()) report.verification = verify_key(locked, report.key, original);
    } else {
      report = run_ol_flow(locked, c.budgets);
      if (c.scope_baseline) {
        ScopeOptions so;
        so.budget = c.budgets.stage(c.budgets.scope_ms);
        r.baseline = score(scope_attack(locked, so), truth);
      }
    }
    Score s = score_functional(report.key, truth, locked, original);
    s.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    r.score = s;
    r.report = std::move(report);
  } catch (const std::exception& e) {
    r.failure = e.what();
  }
  return r;
}

std::vector<RunResult> run_suite(const std::vector<RunConfig>& configs, std::size_t workers) {
  std::vector<RunResult> out(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) out[i] = run_config(configs[i]);
  };
  workers = std::max<std::size_t>(1, std::min(workers, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

namespace {

FlowBudgets budgets_from_json(const json& j) {
  FlowBudgets b;
  b.qbf_ms = j.value("qbf_ms", b.qbf_ms);
  b.dip_ms = j.value("dip_ms", b.dip_ms);
  b.query_ms = j.value("query_ms", b.query_ms);
  b.scope_ms = j.value("scope_ms", b.scope_ms);
  b.max_cegar = j.value("max_cegar", b.max_cegar);
  b.max_dips = j.value("max_dips", b.max_dips);
  b.max_queries = j.value("max_queries", b.max_queries);
  b.conflicts_per_call = j.value("conflicts_per_call", b.conflicts_per_call);
  b.deterministic = j.value("deterministic", b.deterministic);
  b.seed = j.value("seed", b.seed);
  return b;
}

std::string resolve(const std::string& p, const std::string& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = std::filesystem::path(base) / path;
  return path.string();
}

}  // namespace

std::vector<RunConfig> parse_suite(const json& j, const std::string& base_dir, std::size_t* workers) {
  std::vector<RunConfig> out;
  try {
    if (workers) *workers = j.value("workers", std::size_t{1});
    if (!j.contains("runs")) return out;
    for (const auto& run : j.at("runs")) {
      RunConfig c;
      c.circuit = resolve(run.at("circuit").get<std::string>(), base_dir);
      c.name = run.value("name", std::filesystem::path(c.circuit).stem().string());
      c.rll_keys = run.value("rll", std::size_t{0});
      if (run.contains("technique")) {
        auto t = parse_technique(run["technique"].get<std::string>());
        if (!t) throw PreconditionError("unknown technique " + run["technique"].get<std::string>());
        if (*t != Technique::Rll) {
          c.psll = *t;
          c.psll_width = run.at("width").get<std::size_t>();
        } else if (c.rll_keys == 0) {
          c.rll_keys = run.at("width").get<std::size_t>();
        }
      }
      c.seed = run.value("seed", std::uint64_t{1});
      if (run.contains("locked")) c.locked = resolve(run["locked"].get<std::string>(), base_dir);
      if (run.contains("truth")) c.truth = resolve(run["truth"].get<std::string>(), base_dir);
      auto flow = run.value("flow", std::string("og"));
      if (flow == "og" || flow == "OG") c.flow = Flow::Og;
      else if (flow == "ol" || flow == "OL") c.flow = Flow::Ol;
      else throw PreconditionError("unknown flow " + flow);
      c.budgets = budgets_from_json(j.value("budgets", json::object()));
      if (run.contains("budgets")) {
        json merged = j.value("budgets", json::object());
        merged.update(run["budgets"]);
        c.budgets = budgets_from_json(merged);
      }
      c.scope_baseline = run.value("scope_baseline", c.flow == Flow::Ol);
      out.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("bad suite file: ") + e.what());
  }
  return out;
}

json score_json(const Score& s) {
  auto a = s.accuracy();
  return json{{"cdk", s.cdk},
              {"dk", s.dk},
              {"prv", s.prv},
              {"total_keys", s.total_keys},
              {"accuracy", a ? json(*a) : json(nullptr)},
              {"soundness_violation", s.soundness_violation},
              {"wall_time_ms", s.wall_time_ms}};
}

json result_json(const RunResult& r) {
  return json{{"name", r.name},
              {"report", r.report ? report_json(*r.report) : json(nullptr)},
              {"score", r.score ? score_json(*r.score) : json(nullptr)},
              {"scope_baseline", r.baseline ? score_json(*r.baseline) : json(nullptr)},
              {"failure", r.failure ? json(*r.failure) : json(nullptr)}};
}

std::string result_table(const std::vector<RunResult>& results) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-4s %-12s %-5s %9s %6s %6s %8s %8s %10s %10s  %s\n", "run", "flow",
                "scheme", "fam", "cdk/dk", "prv", "keys", "acc", "whole", "class ms", "attack ms", "verdict");
  os << line;
  for (const auto& r : results) {
    if (!r.report) {
      std::snprintf(line, sizeof line, "%-24s failed: %s\n", r.name.c_str(), r.failure ? r.failure->c_str() : "?");
      os << line;
      continue;
    }
    const auto& rep = *r.report;
    const auto& s = *r.score;
    double cls = 0, atk = 0;
    for (auto& [k, v] : rep.stage_times_ms) (k == "classification" ? cls : atk) += v;
    std::string cd = std::to_string(s.cdk) + "/" + std::to_string(s.dk);
    std::string whole = r.baseline ? std::to_string(r.baseline->cdk) + "/" + std::to_string(r.baseline->dk) : "";
    std::string verdict = rep.error ? *rep.error : verification_name(rep.verification);
    if (s.soundness_violation) verdict += " SOUNDNESS_VIOLATION";
    std::snprintf(line, sizeof line, "%-24s %-4s %-12s %-5s %9s %6zu %6zu %8s %8s %10.1f %10.1f  %s\n",
                  r.name.c_str(), flow_name(rep.flow), scheme_name(rep.scheme),
                  rep.family ? family_name(*rep.family) : "-", cd.c_str(), s.prv, s.total_keys,
                  format_accuracy(s).c_str(), whole.c_str(), cls, atk, verdict.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace lockwork
