#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lockwork/flows.hpp"
#include "lockwork/lockers.hpp"

namespace lockwork {

struct Score {
  std::size_t cdk = 0;
  std::size_t dk = 0;
  std::size_t prv = 0;
  std::size_t total_keys = 0;
  /// A PROVEN bit disagrees with the ground truth.
  bool soundness_violation = false;
  double wall_time_ms = 0;

  std::optional<double> accuracy() const {
    if (dk == 0) return std::nullopt;
    return static_cast<double>(cdk) / static_cast<double>(dk);
  }
};

/// Literal scoring: a decided bit is correct when it equals the truth.
Score score(const PartialKey& guess, const GroundTruth& truth);

/// As `score`, but a label group (RLL or PSLL bits) whose decided values
/// differ from the truth still counts as correct when substituting them
/// into the secret keeps the netlist equivalent to the original. PROVEN
/// bits are always compared literally.
Score score_functional(const PartialKey& guess, const GroundTruth& truth, const Netlist& locked,
                       const Netlist& original);

std::string format_accuracy(const Score& s);

struct RunConfig {
  std::string name;
  /// Unlocked circuit: used as oracle and for LEC.
  std::string circuit;
  /// Either lock here ...
  std::size_t rll_keys = 0;
  std::optional<Technique> psll;
  std::size_t psll_width = 0;
  std::uint64_t seed = 1;
  /// ... or read an existing lock and its sidecar.
  std::optional<std::string> locked;
  std::optional<std::string> truth;
  Flow flow = Flow::Og;
  FlowBudgets budgets;
  /// Also run SCOPE on the whole locked netlist for comparison (OL).
  bool scope_baseline = false;
};

struct RunResult {
  std::string name;
  std::optional<AttackReport> report;
  std::optional<Score> score;
  std::optional<Score> baseline;
  /// Per-run failure; the suite carries on.
  std::optional<std::string> failure;
};

RunResult run_config(const RunConfig& c);

/// Runs configs on up to `workers` threads; results keep config order.
std::vector<RunResult> run_suite(const std::vector<RunConfig>& configs, std::size_t workers);

/// Suite file: {"workers": N, "runs": [{...}]}. Relative paths are taken
/// from `base_dir`.
std::vector<RunConfig> parse_suite(const nlohmann::json& j, const std::string& base_dir,
                                   std::size_t* workers = nullptr);

nlohmann::json score_json(const Score& s);
nlohmann::json result_json(const RunResult& r);
/// Text table: one row per run with cdk/dk/prv and stage times.
std::string result_table(const std::vector<RunResult>& results);

}  // namespace lockwork
