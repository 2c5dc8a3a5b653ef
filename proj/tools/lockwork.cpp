// Command-line front end. Exit codes: 0 success, 1 usage, 2 input error,
// 3 attack inconclusive, 4 internal error.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lockwork/analysis.hpp"
#include "lockwork/bench.hpp"
#include "lockwork/equivalence.hpp"
#include "lockwork/error.hpp"
#include "lockwork/harness.hpp"
#include "lockwork/report.hpp"
#include "lockwork/sat/cnf.hpp"
#include "lockwork/transform.hpp"

using namespace lockwork;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kUsage = 1, kInput = 2, kInconclusive = 3, kInternal = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

json classification_json(const Analysis& a) {
  json labels = json::object();
  for (auto& [k, l] : a.classification.labels) labels[k] = label_name(l);
  const auto& c = a.classification;
  return json{{"scheme", scheme_name(c.scheme)},
              {"pslt_technique", c.technique ? json(pslt_technique_name(*c.technique)) : json(nullptr)},
              {"critical_gate", a.cg ? json(a.cg->gate) : json(nullptr)},
              {"relabeled", a.cg ? json(a.cg->relabeled) : json::array()},
              {"labels", labels},
              {"note", c.note}};
}

struct Budgets {
  std::int64_t qbf_ms = 60000, dip_ms = 60000, query_ms = 60000, scope_ms = 60000;
  std::size_t max_cegar = 10000, max_dips = 5000, max_queries = 2000;
  std::int64_t conflicts = 20000;
  bool deterministic = false;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--budget-qbf-ms", qbf_ms, "2QBF wall time");
    app->add_option("--budget-dip-ms", dip_ms, "DIP phase wall time");
    app->add_option("--budget-query-ms", query_ms, "Query phase wall time");
    app->add_option("--budget-scope-ms", scope_ms, "SCOPE wall time");
    app->add_option("--max-cegar", max_cegar, "CEGAR iteration cap");
    app->add_option("--max-dips", max_dips, "DIP cap");
    app->add_option("--max-queries", max_queries, "Query cap");
    app->add_option("--conflicts", conflicts, "Conflict cap per query and per bit proof");
    app->add_flag("--deterministic", deterministic, "Ignore wall-time budgets; counts only");
    app->add_option("--seed", seed, "Seed for random queries");
  }

  FlowBudgets flow() const {
    FlowBudgets b;
    b.qbf_ms = qbf_ms;
    b.dip_ms = dip_ms;
    b.query_ms = query_ms;
    b.scope_ms = scope_ms;
    b.max_cegar = max_cegar;
    b.max_dips = max_dips;
    b.max_queries = max_queries;
    b.conflicts_per_call = conflicts;
    b.deterministic = deterministic;
    b.seed = seed;
    b.factory = sat::solver_factory_from_env();
    return b;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logic-locking lab: lock, classify, partition and attack BENCH netlists"};
  app.require_subcommand(1);

  // lock
  auto* lock_cmd = app.add_subcommand("lock", "Lock a circuit");
  std::string lock_in, lock_out, lock_truth, technique = "rll";
  std::optional<std::string> target;
  std::size_t keys = 0, compound_rll = 0;
  std::uint64_t lock_seed = 1;
  double dtl_ratio = 0.25;
  lock_cmd->add_option("bench", lock_in, "Input BENCH")->required();
  lock_cmd->add_option("--technique", technique, "rll, antisat, dtl, caslock, sarlock, ttlock");
  lock_cmd->add_option("--keys", keys, "Key width of the technique")->required();
  lock_cmd->add_option("--seed", lock_seed, "Seed");
  lock_cmd->add_option("--compound-rll", compound_rll, "RLL keys inserted first");
  lock_cmd->add_option("--target", target, "Output to protect");
  lock_cmd->add_option("--dtl-ratio", dtl_ratio, "Share of tree gates DTL rewrites");
  lock_cmd->add_option("-o,--output", lock_out, "Locked BENCH (default stdout)");
  lock_cmd->add_option("--truth", lock_truth, "Ground-truth sidecar JSON");

  // classify / partition
  auto* classify_cmd = app.add_subcommand("classify", "Classify key inputs");
  std::string classify_in;
  classify_cmd->add_option("bench", classify_in, "Locked BENCH")->required();

  auto* part_cmd = app.add_subcommand("partition", "Remove the critical gate");
  std::string part_in, part_func, part_unit;
  part_cmd->add_option("bench", part_in, "Locked BENCH")->required();
  part_cmd->add_option("--functional", part_func, "Write the functional part here");
  part_cmd->add_option("--unit", part_unit, "Write the locking/restore unit here");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Run the OG or OL flow");
  std::string attack_flow, attack_in, attack_truth;
  std::optional<std::string> oracle_path;
  Budgets budgets;
  attack_cmd->add_option("flow", attack_flow, "og or ol")->required()->check(CLI::IsMember({"og", "ol"}));
  attack_cmd->add_option("bench", attack_in, "Locked BENCH")->required();
  attack_cmd->add_option("--oracle", oracle_path, "Unlocked BENCH: the oracle for og, the scoring reference for ol");
  attack_cmd->add_option("--truth", attack_truth, "Ground-truth sidecar; adds a score");
  budgets.add(attack_cmd);

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "LEC of a locked netlist under a key");
  std::string verify_a, verify_b, verify_key_hex;
  verify_cmd->add_option("locked", verify_a, "Locked BENCH")->required();
  verify_cmd->add_option("original", verify_b, "Original BENCH")->required();
  verify_cmd->add_option("--key", verify_key_hex, "Key in hex, bit i = keyinput i")->required();

  // suite / score
  auto* suite_cmd = app.add_subcommand("suite", "Run a benchmark suite");
  std::string suite_in, suite_out;
  std::optional<std::size_t> suite_workers;
  suite_cmd->add_option("config", suite_in, "Suite JSON")->required();
  suite_cmd->add_option("--out", suite_out, "Directory for the JSON results");
  suite_cmd->add_option("--workers", suite_workers, "Parallel runs");

  auto* score_cmd = app.add_subcommand("score", "Score a report against a sidecar");
  std::string score_report, score_truth;
  score_cmd->add_option("report", score_report, "Report JSON")->required();
  score_cmd->add_option("truth", score_truth, "Ground-truth JSON")->required();

  auto* dimacs_cmd = app.add_subcommand("dimacs-solve", "Solve a DIMACS CNF");
  std::string dimacs_in;
  dimacs_cmd->add_option("cnf", dimacs_in, "DIMACS file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*lock_cmd) {
      auto t = parse_technique(technique);
      if (!t) {
        std::cerr << "unknown technique " << technique << "\n";
        return kUsage;
      }
      Netlist n = read_bench_file(lock_in);
      LockSpec spec{*t, keys, lock_seed, target, dtl_ratio};
      Netlist locked;
      GroundTruth truth;
      if (compound_rll > 0) {
        auto r = lock_compound(n, compound_rll, spec, lock_seed);
        locked = std::move(r.locked);
        truth = std::move(r.truth);
      } else {
        auto r = lock(n, spec);
        locked = std::move(r.locked);
        truth = std::move(r.truth);
      }
      if (lock_out.empty()) std::cout << write_bench(locked);
      else write_bench_file(locked, lock_out);
      if (!lock_truth.empty()) spit(lock_truth, truth_json(truth).dump(2) + "\n");
      return kOk;
    }

    if (*classify_cmd) {
      Netlist n = read_bench_file(classify_in);
      try {
        auto a = analyze(n);
        std::cout << classification_json(a).dump(2) << "\n";
        return a.classification.scheme == Scheme::Unclassified ? kInconclusive : kOk;
      } catch (const CgNotFound& e) {
        std::cout << json{{"scheme", "UNCLASSIFIED"}, {"error", "CG_NOT_FOUND"}, {"note", e.what()}}.dump(2) << "\n";
        return kInconclusive;
      }
    }

    if (*part_cmd) {
      Netlist n = read_bench_file(part_in);
      Analysis a;
      try {
        a = analyze(n);
      } catch (const CgNotFound& e) {
        std::cerr << "CG_NOT_FOUND: " << e.what() << "\n";
        return kInconclusive;
      }
      if (!a.parts) {
        std::cerr << "nothing to partition: scheme " << scheme_name(a.classification.scheme) << "\n";
        return kInconclusive;
      }
      if (!part_func.empty()) write_bench_file(a.parts->functional_part, part_func);
      if (!part_unit.empty()) write_bench_file(a.parts->unit_part, part_unit);
      json j = classification_json(a);
      j["cg_function"] = gate_name(a.parts->cg_function);
      j["functional_keys"] = a.parts->functional_part.keys().size();
      j["unit_keys"] = a.parts->unit_part.keys().size();
      std::cout << j.dump(2) << "\n";
      return kOk;
    }

    if (*attack_cmd) {
      Netlist locked = read_bench_file(attack_in);
      AttackReport r;
      std::optional<Netlist> original;
      if (attack_flow == "og") {
        if (!oracle_path) {
          std::cerr << "attack og needs --oracle\n";
          return kUsage;
        }
        original = read_bench_file(*oracle_path);
        Oracle oracle(*original);
        r = run_og_flow(locked, oracle, budgets.flow());
        // The oracle file doubles as the harness reference for LEC.
        if (r.key.total()) r.verification = verify_key(locked, r.key, *original);
      } else {
        // Never handed to the flow; only the score below looks at it.
        if (oracle_path) original = read_bench_file(*oracle_path);
        r = run_ol_flow(locked, budgets.flow());
      }
      json j = report_json(r);
      if (!attack_truth.empty()) {
        auto truth = truth_from_json(parse_json_file(attack_truth));
        j["score"] = score_json(original ? score_functional(r.key, truth, locked, *original) : score(r.key, truth));
      }
      std::cout << j.dump(2) << "\n";
      if (r.error) return kInconclusive;
      if (attack_flow == "og" && r.verification != Verification::LecPass) return kInconclusive;
      return kOk;
    }

    if (*verify_cmd) {
      Netlist locked = read_bench_file(verify_a);
      Netlist original = read_bench_file(verify_b);
      auto bits = parse_key_hex(verify_key_hex, locked.keys().size());
      PartialKey k = PartialKey::unknown(locked);
      for (std::size_t i = 0; i < bits.size(); ++i) k.set(k.names[i], bits[i], Provenance::Verified);
      auto v = verify_key(locked, k, original);
      std::cout << verification_name(v) << "\n";
      return v == Verification::LecPass ? kOk : kInconclusive;
    }

    if (*suite_cmd) {
      std::size_t workers = 1;
      auto configs = parse_suite(parse_json_file(suite_in),
                                 std::filesystem::path(suite_in).parent_path().string(), &workers);
      if (suite_workers) workers = *suite_workers;
      auto results = run_suite(configs, workers);
      json all = json::array();
      for (auto& r : results) all.push_back(result_json(r));
      if (!suite_out.empty()) {
        std::filesystem::create_directories(suite_out);
        spit((std::filesystem::path(suite_out) / "results.json").string(), all.dump(2) + "\n");
        spit((std::filesystem::path(suite_out) / "table.txt").string(), result_table(results));
      }
      std::cout << result_table(results);
      for (auto& r : results)
        if (r.score && r.score->soundness_violation) return kInternal;
      return kOk;
    }

    if (*score_cmd) {
      json rep = parse_json_file(score_report);
      auto truth = truth_from_json(parse_json_file(score_truth));
      PartialKey k;
      try {
        k.names = rep.at("key_names").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < k.names.size(); ++i) {
          const auto& b = rep.at("bits").at(i);
          k.bits.push_back(b.is_number() ? std::optional<bool>(b.get<int>() != 0) : std::nullopt);
          auto p = rep.at("provenance").at(i).get<std::string>();
          k.provenance.push_back(p == "PROVEN"     ? Provenance::Proven
                                 : p == "VERIFIED" ? Provenance::Verified
                                 : p == "GUESSED"  ? Provenance::Guessed
                                                   : Provenance::Unknown);
        }
      } catch (const json::exception& e) {
        throw PreconditionError(std::string("bad report: ") + e.what());
      }
      auto s = score(k, truth);
      json j = score_json(s);
      j["accuracy_text"] = format_accuracy(s);
      std::cout << j.dump(2) << "\n";
      return s.soundness_violation ? kInternal : kOk;
    }

    if (*dimacs_cmd) {
      auto f = sat::parse_dimacs(slurp(dimacs_in));
      auto res = sat::solve(f, {}, sat::Budget{});
      if (res.status == sat::Status::Sat) {
        std::cout << "s SATISFIABLE\nv";
        for (int v = 0; v < f.variable_count; ++v) std::cout << ' ' << (res.values[v] ? v + 1 : -(v + 1));
        std::cout << " 0\n";
        return kOk;
      }
      if (res.status == sat::Status::Unsat) {
        std::cout << "s UNSATISFIABLE\n";
        return kOk;
      }
      std::cout << "s UNKNOWN\n";
      return kInconclusive;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
