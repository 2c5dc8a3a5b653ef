#include "lockwork/sat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace lockwork::sat {

const char* status_name(Status s) {
  switch (s) {
    case Status::Sat: return "SAT";
    case Status::Unsat: return "UNSAT";
    case Status::Timeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

using CRef = std::uint32_t;
constexpr CRef kNoRef = 0xffffffffu;

// Assignment values, xor-able with a literal sign.
constexpr std::uint8_t kTrue = 0, kFalse = 1, kUndef = 2;

struct Watcher {
  CRef cref;
  Lit blocker;
};

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

struct Solver::Impl {
  // Clause arena: [header][activity][lbd][lits...].
  // header = size | learnt << 30 | deleted << 31.
  std::vector<std::uint32_t> arena;
  std::size_t wasted = 0;
  std::vector<CRef> clauses, learnts;

  std::vector<std::uint8_t> assigns;
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<std::uint8_t> polarity;
  std::vector<std::uint8_t> seen;
  std::vector<double> activity;
  std::vector<std::vector<Watcher>> watches;

  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::size_t qhead = 0;

  // Max-heap of vars by activity.
  std::vector<Var> heap;
  std::vector<int> heap_index;

  std::vector<std::uint8_t> model;
  bool ok = true;
  double var_inc = 1, cla_inc = 1;
  double var_decay = 0.95, cla_decay = 0.999;
  double max_learnts = 0;
  std::mt19937_64 rng{0};
  double random_freq = 0;

  std::vector<Lit> analyze_stack, analyze_toclear;
  SolverStats stats;

  // --- clause access -------------------------------------------------------
  std::uint32_t csize(CRef c) const { return arena[c] & 0x3fffffffu; }
  bool clearnt(CRef c) const { return arena[c] & (1u << 30); }
  bool cdeleted(CRef c) const { return arena[c] & (1u << 31); }
  Lit* clits(CRef c) { return reinterpret_cast<Lit*>(&arena[c + 3]); }
  float& cact(CRef c) { return *reinterpret_cast<float*>(&arena[c + 1]); }
  std::uint32_t& clbd(CRef c) { return arena[c + 2]; }

  CRef alloc(std::span<const Lit> lits, bool learnt) {
    CRef c = static_cast<CRef>(arena.size());
    arena.push_back(static_cast<std::uint32_t>(lits.size()) | (learnt ? 1u << 30 : 0u));
    arena.push_back(0);
    arena.push_back(0);
    cact(c) = 0;
    for (Lit l : lits) arena.push_back(l.x);
    return c;
  }

  // --- assignment ----------------------------------------------------------
  std::uint8_t val(Lit l) const {
    std::uint8_t a = assigns[l.var()];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (l.sign() ? 1 : 0));
  }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void enqueue(Lit p, CRef from) {
    Var v = p.var();
    assigns[v] = p.sign() ? kFalse : kTrue;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(p);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t c = trail.size(); c-- > static_cast<std::size_t>(trail_lim[lvl]);) {
      Var v = trail[c].var();
      assigns[v] = kUndef;
      polarity[v] = trail[c].sign();
      heap_insert(v);
    }
    qhead = trail_lim[lvl];
    trail.resize(trail_lim[lvl]);
    trail_lim.resize(lvl);
  }

  // --- heap ------------------------------------------------------------------
  bool heap_lt(Var a, Var b) const { return activity[a] > activity[b]; }
  void heap_up(int i) {
    Var v = heap[i];
    while (i > 0) {
      int p = (i - 1) >> 1;
      if (!heap_lt(v, heap[p])) break;
      heap[i] = heap[p];
      heap_index[heap[i]] = i;
      i = p;
    }
    heap[i] = v;
    heap_index[v] = i;
  }
  void heap_down(int i) {
    Var v = heap[i];
    int n = static_cast<int>(heap.size());
    for (;;) {
      int c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && heap_lt(heap[c + 1], heap[c])) ++c;
      if (!heap_lt(heap[c], v)) break;
      heap[i] = heap[c];
      heap_index[heap[i]] = i;
      i = c;
    }
    heap[i] = v;
    heap_index[v] = i;
  }
  void heap_insert(Var v) {
    if (heap_index[v] >= 0) return;
    heap.push_back(v);
    heap_index[v] = static_cast<int>(heap.size()) - 1;
    heap_up(heap_index[v]);
  }
  Var heap_pop() {
    Var top = heap[0];
    heap[0] = heap.back();
    heap_index[heap[0]] = 0;
    heap.pop_back();
    heap_index[top] = -1;
    if (!heap.empty()) heap_down(0);
    return top;
  }

  void bump_var(Var v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (double& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    if (heap_index[v] >= 0) heap_up(heap_index[v]);
  }
  void bump_clause(CRef c) {
    if ((cact(c) += static_cast<float>(cla_inc)) > 1e20f) {
      for (CRef l : learnts) cact(l) *= 1e-20f;
      cla_inc *= 1e-20;
    }
  }

  // --- watches -------------------------------------------------------------
  void attach(CRef c) {
    Lit* l = clits(c);
    watches[(~l[0]).x].push_back({c, l[1]});
    watches[(~l[1]).x].push_back({c, l[0]});
  }

  CRef propagate() {
    CRef confl = kNoRef;
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      auto& ws = watches[p.x];
      Lit false_lit = ~p;
      std::size_t i = 0, j = 0, n = ws.size();
      ++stats.propagations;
      while (i < n) {
        Watcher w = ws[i];
        if (val(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        CRef cr = w.cref;
        Lit* c = clits(cr);
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        Lit first = c[0];
        Watcher nw{cr, first};
        if (first != w.blocker && val(first) == kTrue) {
          ws[j++] = nw;
          continue;
        }
        std::uint32_t sz = csize(cr);
        bool moved = false;
        for (std::uint32_t k = 2; k < sz; ++k) {
          if (val(c[k]) != kFalse) {
            c[1] = c[k];
            c[k] = false_lit;
            watches[(~c[1]).x].push_back(nw);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = nw;
        if (val(first) == kFalse) {
          confl = cr;
          qhead = trail.size();
          while (i < n) ws[j++] = ws[i++];
        } else {
          enqueue(first, cr);
        }
      }
      ws.resize(j);
      if (confl != kNoRef) break;
    }
    return confl;
  }

  // --- conflict analysis ------------------------------------------------------
  std::uint32_t abstract_level(Var v) const { return 1u << (level[v] & 31); }

  bool lit_redundant(Lit p, std::uint32_t levels) {
    analyze_stack.clear();
    analyze_stack.push_back(p);
    std::size_t top = analyze_toclear.size();
    while (!analyze_stack.empty()) {
      Lit q = analyze_stack.back();
      analyze_stack.pop_back();
      CRef cr = reason[q.var()];
      Lit* c = clits(cr);
      std::uint32_t sz = csize(cr);
      for (std::uint32_t i = 1; i < sz; ++i) {
        Lit l = c[i];
        Var v = l.var();
        if (seen[v] || level[v] == 0) continue;
        if (reason[v] != kNoRef && (abstract_level(v) & levels)) {
          seen[v] = 1;
          analyze_stack.push_back(l);
          analyze_toclear.push_back(l);
        } else {
          for (std::size_t k = top; k < analyze_toclear.size(); ++k)
            seen[analyze_toclear[k].var()] = 0;
          analyze_toclear.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  void analyze(CRef confl, std::vector<Lit>& learnt, int& bt_level, std::uint32_t& lbd) {
    int path = 0;
    bool have_p = false;
    Lit p;
    learnt.clear();
    learnt.push_back(Lit{});
    std::size_t index = trail.size();
    do {
      if (clearnt(confl)) bump_clause(confl);
      Lit* c = clits(confl);
      std::uint32_t sz = csize(confl);
      for (std::uint32_t j = have_p ? 1 : 0; j < sz; ++j) {
        Lit q = c[j];
        Var v = q.var();
        if (seen[v] || level[v] == 0) continue;
        bump_var(v);
        seen[v] = 1;
        if (level[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen[trail[--index].var()]) {
      }
      p = trail[index];
      have_p = true;
      confl = reason[p.var()];
      seen[p.var()] = 0;
      --path;
    } while (path > 0);
    learnt[0] = ~p;

    analyze_toclear.assign(learnt.begin(), learnt.end());
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(learnt[i].var());
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      Var v = learnt[i].var();
      if (reason[v] == kNoRef || !lit_redundant(learnt[i], levels)) learnt[j++] = learnt[i];
    }
    learnt.resize(j);

    bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level[learnt[i].var()] > level[learnt[max_i].var()]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level[learnt[1].var()];
    }
    for (Lit l : analyze_toclear) seen[l.var()] = 0;

    std::vector<int> lv;
    for (Lit l : learnt) lv.push_back(level[l.var()]);
    std::sort(lv.begin(), lv.end());
    lbd = static_cast<std::uint32_t>(std::unique(lv.begin(), lv.end()) - lv.begin());
  }

  // --- learnt clause database ----------------------------------------------
  bool locked(CRef c) {
    Lit l0 = clits(c)[0];
    return reason[l0.var()] == c && val(l0) == kTrue;
  }

  void reduce_db() {
    std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
      bool a_bin = csize(a) <= 2, b_bin = csize(b) <= 2;
      if (a_bin != b_bin) return !a_bin;
      return cact(a) < cact(b);
    });
    double extra_lim = cla_inc / static_cast<double>(std::max<std::size_t>(learnts.size(), 1));
    std::size_t j = 0;
    for (std::size_t i = 0; i < learnts.size(); ++i) {
      CRef c = learnts[i];
      bool removable = csize(c) > 2 && clbd(c) > 2 && !locked(c) &&
                       (i < learnts.size() / 2 || cact(c) < extra_lim);
      if (removable) {
        arena[c] |= 1u << 31;
        wasted += csize(c) + 3;
      } else {
        learnts[j++] = c;
      }
    }
    learnts.resize(j);
    for (auto& ws : watches)
      ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return cdeleted(w.cref); }),
               ws.end());
    if (wasted * 2 > arena.size()) garbage_collect();
  }

  void garbage_collect() {
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena.size() - wasted);
    auto move = [&](CRef c) {
      CRef nc = static_cast<CRef>(fresh.size());
      std::uint32_t words = csize(c) + 3;
      fresh.insert(fresh.end(), arena.begin() + c, arena.begin() + c + words);
      arena[c + 2] = nc;  // forward pointer replaces lbd in the old copy
      return nc;
    };
    for (auto& c : clauses) c = move(c);
    for (auto& c : learnts) c = move(c);
    // Old arena now holds forward pointers in slot 2.
    for (auto& ws : watches)
      for (auto& w : ws) w.cref = arena[w.cref + 2];
    for (Lit l : trail) {
      CRef& r = reason[l.var()];
      if (r != kNoRef) r = arena[r + 2];
    }
    arena.swap(fresh);
    wasted = 0;
  }

  // --- search ----------------------------------------------------------------
  Lit pick_branch() {
    Var next = -1;
    if (random_freq > 0 && !heap.empty() &&
        static_cast<double>(rng() >> 11) * 0x1.0p-53 < random_freq) {
      next = heap[rng() % heap.size()];
      if (assigns[next] != kUndef) next = -1;
    }
    while (next == -1 || assigns[next] != kUndef) {
      if (heap.empty()) return Lit{0xffffffffu};
      next = heap_pop();
    }
    return Lit::make(next, polarity[next]);
  }

  enum class Res { Sat, Unsat, Restart, Timeout };

  Res search(std::int64_t nof_conflicts, std::span<const Lit> assumptions, const Budget& budget,
             std::int64_t& conflicts_left) {
    std::int64_t conflict_c = 0;
    std::vector<Lit> learnt;
    for (;;) {
      CRef confl = propagate();
      if (confl != kNoRef) {
        ++stats.conflicts;
        ++conflict_c;
        if (conflicts_left > 0) --conflicts_left;
        if (decision_level() == 0) {
          ok = false;
          return Res::Unsat;
        }
        int bt;
        std::uint32_t lbd;
        analyze(confl, learnt, bt, lbd);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoRef);
        } else {
          CRef cr = alloc(learnt, true);
          clbd(cr) = lbd;
          learnts.push_back(cr);
          attach(cr);
          bump_clause(cr);
          enqueue(learnt[0], cr);
        }
        var_inc /= var_decay;
        cla_inc /= cla_decay;
        if (conflicts_left == 0) return Res::Timeout;
        if ((stats.conflicts & 63) == 0 && budget.expired()) return Res::Timeout;
        continue;
      }
      if (nof_conflicts >= 0 && conflict_c >= nof_conflicts) {
        cancel_until(0);
        return Res::Restart;
      }
      if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts)
        reduce_db();

      Lit next{0xffffffffu};
      while (decision_level() < static_cast<int>(assumptions.size())) {
        Lit a = assumptions[decision_level()];
        std::uint8_t v = val(a);
        if (v == kTrue) {
          trail_lim.push_back(static_cast<int>(trail.size()));
        } else if (v == kFalse) {
          return Res::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next.x == 0xffffffffu) {
        ++stats.decisions;
        next = pick_branch();
        if (next.x == 0xffffffffu) return Res::Sat;
      }
      trail_lim.push_back(static_cast<int>(trail.size()));
      enqueue(next, kNoRef);
    }
  }
};

Solver::Solver() : impl_(std::make_unique<Impl>()) {}
Solver::~Solver() = default;

Var Solver::new_var() {
  Impl& s = *impl_;
  Var v = static_cast<Var>(s.assigns.size());
  s.assigns.push_back(kUndef);
  s.level.push_back(0);
  s.reason.push_back(kNoRef);
  s.polarity.push_back(1);
  s.seen.push_back(0);
  s.activity.push_back(0);
  s.heap_index.push_back(-1);
  s.watches.emplace_back();
  s.watches.emplace_back();
  s.heap_insert(v);
  return v;
}

int Solver::num_vars() const { return static_cast<int>(impl_->assigns.size()); }

bool Solver::add_clause(std::span<const Lit> clause) {
  Impl& s = *impl_;
  if (!s.ok) return false;
  std::vector<Lit> c(clause.begin(), clause.end());
  for (Lit l : c)
    while (l.var() >= num_vars()) new_var();
  std::sort(c.begin(), c.end());
  std::size_t j = 0;
  Lit prev{0xffffffffu};
  for (Lit l : c) {
    std::uint8_t v = s.val(l);
    if (v == kTrue || l == ~prev) return true;
    if (v != kFalse && l != prev) c[j++] = prev = l;
  }
  c.resize(j);
  if (c.empty()) return s.ok = false;
  if (c.size() == 1) {
    s.enqueue(c[0], kNoRef);
    return s.ok = (s.propagate() == kNoRef);
  }
  CRef cr = s.alloc(c, false);
  s.clauses.push_back(cr);
  s.attach(cr);
  return true;
}

Status Solver::solve(std::span<const Lit> assumptions, const Budget& budget) {
  Impl& s = *impl_;
  s.model.clear();
  if (!s.ok) return Status::Unsat;
  for (Lit a : assumptions)
    while (a.var() >= num_vars()) new_var();
  s.max_learnts = std::max<double>(static_cast<double>(s.clauses.size()) / 3.0, 5000.0);
  std::int64_t conflicts_left = budget.conflicts < 0 ? -1 : budget.conflicts;
  if (conflicts_left == 0) return Status::Timeout;
  Impl::Res r = Impl::Res::Restart;
  for (int restarts = 0; r == Impl::Res::Restart; ++restarts) {
    if (budget.expired()) {
      r = Impl::Res::Timeout;
      break;
    }
    r = s.search(static_cast<std::int64_t>(luby(2, restarts) * 100), assumptions, budget,
                 conflicts_left);
    ++s.stats.restarts;
    s.max_learnts *= 1.05;
  }
  Status out = Status::Timeout;
  if (r == Impl::Res::Sat) {
    s.model.assign(s.assigns.begin(), s.assigns.end());
    out = Status::Sat;
  } else if (r == Impl::Res::Unsat) {
    out = Status::Unsat;
  }
  s.cancel_until(0);
  return out;
}

bool Solver::value(Var v) const {
  const Impl& s = *impl_;
  return v < static_cast<Var>(s.model.size()) && s.model[v] == kTrue;
}

void Solver::set_random_seed(std::uint64_t seed, double freq) {
  impl_->rng.seed(seed);
  impl_->random_freq = seed == 0 ? 0.0 : freq;
}

const SolverStats& Solver::stats() const { return impl_->stats; }

}  // namespace lockwork::sat
