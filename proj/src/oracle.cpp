#include "lockwork/oracle.hpp"

#include "lockwork/error.hpp"
#include "lockwork/simulate.hpp"

namespace lockwork {

Oracle::Oracle(Netlist activated) : hidden_(std::move(activated)) {
  if (!hidden_.keys().empty()) throw PreconditionError("oracle netlist still has key inputs");
  inputs_ = hidden_.input_names();
  outputs_ = hidden_.output_names();
}

std::vector<bool> Oracle::query(const std::vector<bool>& inputs) const {
  if (inputs.size() != inputs_.size()) throw PreconditionError("oracle query has the wrong width");
  count_.fetch_add(1);
  return evaluate(hidden_, inputs, {});
}

}  // namespace lockwork
