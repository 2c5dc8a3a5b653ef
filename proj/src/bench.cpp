#include "lockwork/bench.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "lockwork/error.hpp"

namespace lockwork {
namespace {

struct GateDecl {
  std::string out;
  GateType type;
  std::vector<std::string> ins;
  int line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Identifiers may also start with a digit: ISCAS files name nets "1", "22".
bool valid_id(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '[' &&
        c != ']')
      return false;
  return true;
}

// Splits "FUNC(a, b)" into FUNC and its arguments.
bool split_call(std::string_view s, std::string_view& func, std::vector<std::string>& args) {
  auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') return false;
  func = trim(s.substr(0, open));
  auto inner = s.substr(open + 1, s.size() - open - 2);
  args.clear();
  if (trim(inner).empty()) return true;
  std::size_t start = 0;
  for (;;) {
    auto comma = inner.find(',', start);
    args.emplace_back(trim(inner.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return true;
}

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
  std::vector<std::pair<std::string, int>> inputs, outputs;
  std::vector<GateDecl> gates;
  std::unordered_map<std::string, int> defined_at;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    auto hash = raw.find('#');
    auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    auto define = [&](const std::string& id) {
      if (!valid_id(id)) throw ParseError(lineno, "invalid identifier '" + id + "'");
      auto [it, fresh] = defined_at.emplace(id, lineno);
      if (!fresh)
        throw ParseError(lineno, "duplicate net definition '" + id + "' (first at line " +
                                     std::to_string(it->second) + ")");
    };

    auto eq = line.find('=');
    std::string_view func;
    std::vector<std::string> args;
    if (eq == std::string_view::npos) {
      if (!split_call(line, func, args) || args.size() != 1)
        throw ParseError(lineno, "syntax error: '" + std::string(line) + "'");
      std::string f(func);
      for (auto& c : f) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (f == "INPUT") {
        define(args[0]);
        inputs.emplace_back(args[0], lineno);
      } else if (f == "OUTPUT") {
        if (!valid_id(args[0])) throw ParseError(lineno, "invalid identifier '" + args[0] + "'");
        outputs.emplace_back(args[0], lineno);
      } else {
        throw ParseError(lineno, "syntax error: unknown directive '" + std::string(func) + "'");
      }
      continue;
    }
    std::string out(trim(line.substr(0, eq)));
    if (!split_call(trim(line.substr(eq + 1)), func, args))
      throw ParseError(lineno, "syntax error: '" + std::string(line) + "'");
    auto type = parse_gate_name(func);
    if (!type) throw ParseError(lineno, "unknown gate function '" + std::string(func) + "'");
    bool unary = *type == GateType::Not || *type == GateType::Buf;
    if (unary ? args.size() != 1 : args.size() < 2)
      throw ParseError(lineno, std::string("bad arity for ") + gate_name(*type));
    for (auto& a : args)
      if (!valid_id(a)) throw ParseError(lineno, "invalid identifier '" + a + "'");
    define(out);
    gates.push_back({std::move(out), *type, std::move(args), lineno});
  }

  NetlistBuilder b(std::move(name));
  for (auto& [id, line] : inputs) {
    try {
      b.add_input(id);
    } catch (const ParseError& e) {
      throw ParseError(line, e.what());
    }
  }

  std::unordered_map<std::string, std::size_t> gate_of;
  for (std::size_t i = 0; i < gates.size(); ++i) gate_of.emplace(gates[i].out, i);
  for (const auto& g : gates)
    for (const auto& a : g.ins)
      if (!defined_at.count(a)) throw ParseError(g.line, "undeclared fanin '" + a + "'");

  auto is_const = [](const GateDecl& g) {
    return g.ins.size() == 2 && g.ins[0] == g.ins[1] &&
           (g.type == GateType::Xor || g.type == GateType::Xnor);
  };
  for (const auto& g : gates)
    if (is_const(g)) b.add_constant(g.out, g.type == GateType::Xnor);

  // Iterative DFS keeps declaration order among independent gates.
  std::vector<std::uint8_t> state(gates.size(), 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t root = 0; root < gates.size(); ++root) {
    if (state[root] || is_const(gates[root])) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [gi, next] = stack.back();
      const GateDecl& g = gates[gi];
      if (next < g.ins.size()) {
        auto it = gate_of.find(g.ins[next++]);
        if (it == gate_of.end() || is_const(gates[it->second])) continue;
        std::size_t child = it->second;
        if (state[child] == 1) throw ParseError(g.line, "cyclic definition through '" + g.out + "'");
        if (state[child] == 0) {
          state[child] = 1;
          stack.emplace_back(child, 0);
        }
        continue;
      }
      std::vector<NetId> fanins;
      for (const auto& a : g.ins) fanins.push_back(*b.find(a));
      try {
        b.add_gate(g.out, g.type, std::move(fanins));
      } catch (const ParseError& e) {
        throw ParseError(g.line, e.what());
      }
      state[gi] = 2;
      stack.pop_back();
    }
  }

  for (auto& [id, line] : outputs) {
    auto f = b.find(id);
    if (!f) throw ParseError(line, "output '" + id + "' names no net");
    try {
      b.add_output(*f);
    } catch (const ParseError& e) {
      throw ParseError(line, e.what());
    }
  }
  return std::move(b).build();
}

std::string write_bench(const Netlist& n) {
  std::ostringstream os;
  if (!n.name().empty()) os << "# " << n.name() << "\n";
  os << "# " << n.inputs().size() << " inputs, " << n.keys().size() << " key inputs, "
     << n.outputs().size() << " outputs, " << n.gate_count() << " gates\n\n";
  for (NetId i : n.inputs()) os << "INPUT(" << n.net(i).name << ")\n";
  for (NetId i : n.keys()) os << "INPUT(" << n.net(i).name << ")\n";
  os << "\n";
  for (NetId o : n.outputs()) os << "OUTPUT(" << n.net(o).name << ")\n";
  os << "\n";
  std::string anchor;
  if (!n.inputs().empty())
    anchor = n.net(n.inputs()[0]).name;
  else if (!n.keys().empty())
    anchor = n.net(n.keys()[0]).name;
  for (const Net& net : n.nets()) {
    if (!net.is_const()) continue;
    if (anchor.empty()) throw PreconditionError("constant net '" + net.name + "' needs an input to anchor on");
    os << net.name << " = " << (net.kind == NetKind::Const1 ? "XNOR" : "XOR") << "(" << anchor
       << ", " << anchor << ")\n";
  }
  for (const Net& net : n.nets()) {
    if (!net.is_gate()) continue;
    os << net.name << " = " << gate_name(net.type) << "(";
    for (std::size_t i = 0; i < net.fanins.size(); ++i)
      os << (i ? ", " : "") << n.net(net.fanins[i]).name;
    os << ")\n";
  }
  return os.str();
}

Netlist read_bench_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bench(ss.str(), std::filesystem::path(path).stem().string());
}

void write_bench_file(const Netlist& n, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_bench(n);
}

}  // namespace lockwork
