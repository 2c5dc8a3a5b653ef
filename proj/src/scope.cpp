#include <algorithm>
#include <cmath>

#include "lockwork/attacks.hpp"
#include "lockwork/transform.hpp"

namespace lockwork {

// A correct key bit usually lets more logic fold away: the key gate and an
// inverter next to it cancel, or a comparator collapses into a wire. The
// variant with fewer literals after simplification is taken as the guess.
PartialKey scope_attack(const Netlist& locked, const ScopeOptions& opt) {
  PartialKey key = PartialKey::unknown(locked);
  RewriteOptions rw;
  rw.strash = true;
  rw.keep_unused_keys = true;
  for (NetId k : keys_by_index(locked)) {
    if (opt.budget.expired()) break;
    auto size = [&](bool v) {
      return structural_stats(propagate_constants(locked, {{k, v}}, rw)).literal_count;
    };
    double a = static_cast<double>(size(false));
    double b = static_cast<double>(size(true));
    double hi = std::max(a, b);
    if (hi == 0 || std::abs(a - b) / hi < opt.threshold) continue;
    key.set(locked.net(k).name, b < a, Provenance::Guessed);
  }
  return key;
}

}  // namespace lockwork
