#include "lockwork/sat/backend.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "lockwork/error.hpp"

namespace lockwork::sat {

ExternalSolver::ExternalSolver(std::string command) : command_(std::move(command)) {}

bool ExternalSolver::add_clause(std::span<const Lit> clause) {
  std::vector<int> c;
  for (Lit l : clause) {
    if (l.var() >= vars_) vars_ = l.var() + 1;
    c.push_back(l.to_dimacs());
  }
  clauses_.push_back(std::move(c));
  return true;
}

namespace {

std::string temp_path() {
  static std::atomic<unsigned> counter{0};
  std::ostringstream os;
  os << "lockwork_" << ::getpid() << "_" << std::hash<std::thread::id>{}(std::this_thread::get_id())
     << "_" << counter++ << ".cnf";
  return (std::filesystem::temp_directory_path() / os.str()).string();
}

}  // namespace

Status ExternalSolver::solve(std::span<const Lit> assumptions, const Budget& budget) {
  model_.clear();
  std::string path = temp_path();
  {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "p cnf " << vars_ << " " << clauses_.size() + assumptions.size() << "\n";
    for (const auto& c : clauses_) {
      for (int l : c) out << l << " ";
      out << "0\n";
    }
    for (Lit a : assumptions) out << a.to_dimacs() << " 0\n";
  }
  std::string cmd = command_ + " " + path;
  if (budget.deadline) {
    auto left = std::chrono::duration_cast<std::chrono::seconds>(*budget.deadline -
                                                                 std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      std::filesystem::remove(path);
      return Status::Timeout;
    }
    cmd = "timeout -s KILL " + std::to_string(left.count() + 1) + " " + cmd;
  }
  cmd += " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(path);
    throw Error("cannot run external solver: " + command_);
  }
  std::string text;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, got);
  ::pclose(pipe);
  std::filesystem::remove(path);

  Status st = Status::Timeout;
  std::vector<bool> model(vars_, false);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) st = Status::Unsat;
      else if (line.find("SATISFIABLE") != std::string::npos) st = Status::Sat;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream ls(line.substr(2));
      int l;
      while (ls >> l)
        if (l != 0 && std::abs(l) <= vars_) model[std::abs(l) - 1] = l > 0;
    }
  }
  if (st == Status::Sat) model_ = std::move(model);
  return st;
}

bool ExternalSolver::value(Var v) const {
  return v < static_cast<Var>(model_.size()) && model_[v];
}

SolverFactory embedded_solver_factory() {
  return [] { return std::make_unique<Solver>(); };
}

SolverFactory external_solver_factory(std::string command) {
  return [command] { return std::make_unique<ExternalSolver>(command); };
}

SolverFactory solver_factory_from_env() {
  const char* cmd = std::getenv(kSolverEnv);
  if (cmd && *cmd) return external_solver_factory(cmd);
  return embedded_solver_factory();
}

}  // namespace lockwork::sat
