#pragma once

#include <string>
#include <string_view>

#include "lockwork/netlist.hpp"

namespace lockwork {

/// Parses BENCH text. `x = XOR(a, a)` and `x = XNOR(a, a)` become constant
/// nets. Gates may appear in any order; the result is topologically sorted
/// with declaration order kept where dependencies allow.
Netlist parse_bench(std::string_view text, std::string name = {});

/// Inputs first (primary, then keys), outputs, constants, gates.
std::string write_bench(const Netlist& n);

Netlist read_bench_file(const std::string& path);
void write_bench_file(const Netlist& n, const std::string& path);

}  // namespace lockwork
