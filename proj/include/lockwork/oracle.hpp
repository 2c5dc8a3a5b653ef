#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "lockwork/netlist.hpp"

namespace lockwork {

/// One input/response pair, positional in the oracle's name order.
struct Observation {
  std::vector<bool> inputs;
  std::vector<bool> outputs;
};

/// A working chip: answers queries, reveals nothing else. Safe for
/// concurrent queries.
class Oracle {
 public:
  /// `activated` must have no key inputs (apply the key first).
  explicit Oracle(Netlist activated);

  const std::vector<std::string>& input_names() const { return inputs_; }
  const std::vector<std::string>& output_names() const { return outputs_; }

  std::vector<bool> query(const std::vector<bool>& inputs) const;
  std::size_t query_count() const { return count_.load(); }

 private:
  Netlist hidden_;
  std::vector<std::string> inputs_, outputs_;
  mutable std::atomic<std::size_t> count_{0};
};

}  // namespace lockwork
