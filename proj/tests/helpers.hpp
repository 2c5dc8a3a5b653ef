#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lockwork/bench.hpp"
#include "lockwork/netlist.hpp"
#include "lockwork/simulate.hpp"

namespace testing {

inline lockwork::Netlist corpus(const std::string& name) {
  return lockwork::read_bench_file(std::string(LOCKWORK_BENCH_DIR) + "/" + name + ".bench");
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{"c17",   "c432",  "c880",  "c1355",
                                              "c1908", "c2670", "c3540", "c5315"};
  return names;
}

inline std::vector<bool> bits_of(std::uint64_t v, std::size_t n) {
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (v >> i) & 1;
  return b;
}

inline std::vector<bool> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rng() & 1;
  return b;
}

/// Key vector (in n.keys() order) as a by-name assignment.
inline lockwork::Assignment key_assignment(const lockwork::Netlist& n, const std::vector<bool>& k) {
  lockwork::Assignment a;
  for (std::size_t i = 0; i < k.size(); ++i) a[n.net(n.keys()[i]).name] = k[i];
  return a;
}

/// Key bits of `secret` laid out in n.keys() order.
inline std::vector<bool> key_vector(const lockwork::Netlist& n, const lockwork::Assignment& secret) {
  std::vector<bool> k;
  for (auto id : n.keys()) k.push_back(secret.at(n.net(id).name));
  return k;
}

/// Outputs of `locked` under `key` agree with `original` on every input pattern.
/// Exhaustive for up to 16 inputs; 4096 random patterns otherwise.
inline bool agrees(const lockwork::Netlist& locked, const std::vector<bool>& key,
                   const lockwork::Netlist& original, std::uint64_t seed = 1) {
  std::size_t n = original.inputs().size();
  std::mt19937_64 rng(seed);
  std::size_t patterns = n <= 16 ? (std::size_t{1} << n) : 4096;
  std::vector<std::uint64_t> kw(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) kw[i] = key[i] ? ~0ull : 0;
  auto onames = original.output_names();
  for (std::size_t base = 0; base < patterns; base += 64) {
    std::vector<std::uint64_t> iw(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (n <= 16) {
        std::uint64_t w = 0;
        for (std::size_t b = 0; b < 64; ++b) w |= static_cast<std::uint64_t>(((base + b) >> i) & 1) << b;
        iw[i] = w;
      } else {
        iw[i] = rng();
      }
    }
    // Locked inputs may be ordered differently; map by name.
    std::vector<std::uint64_t> liw(locked.inputs().size());
    for (std::size_t i = 0; i < liw.size(); ++i)
      liw[i] = iw[original.input_index(original.id(locked.net(locked.inputs()[i]).name))];
    auto vo = lockwork::simulate_words(original, iw, {});
    auto vl = lockwork::simulate_words(locked, liw, kw);
    std::uint64_t mask = patterns - base >= 64 ? ~0ull : ((1ull << (patterns - base)) - 1);
    for (auto o : original.outputs())
      if ((vo[o] ^ vl[locked.id(original.net(o).name)]) & mask) return false;
  }
  return true;
}

}  // namespace testing
