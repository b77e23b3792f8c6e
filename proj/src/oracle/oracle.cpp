// Copyright 2026 The mtlcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oracle/oracle.hpp"

#include <json.hpp>
#include <functional>
#include <map>
#include <unordered_set>

namespace mtl::oracle {

std::string to_json(const Schedule& s) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const auto& st = s.steps[i];
    nlohmann::ordered_json rec;
    rec["step"] = i;
    rec["thread"] = st.thread_name;
    rec["statement_text"] = st.text;
    nlohmann::ordered_json writes = nlohmann::ordered_json::object();
    for (const auto& [var, value] : st.writes) writes[var] = value;
    rec["writes"] = writes;
    rec["thread_id"] = st.thread;
    rec["stmt_index"] = st.stmt;
    j.push_back(rec);
  }
  return j.dump(2);
}

namespace {

struct State {
  std::vector<uint32_t> pc;
  std::vector<uint8_t> started;
  std::vector<int64_t> locals;
  std::vector<int64_t> shared;
  std::vector<int8_t> guard_cache;  // -1 unknown; guard inputs never change once read
  bool violated = false;
  StmtRef violation{0, 0};
};

class Machine {
 public:
  Machine(const NormalizedProgram& p, int width) : p_(p), width_(width) {}

  State initial() const {
    State s;
    s.pc.assign(p_.threads.size(), 0);
    s.started.assign(p_.threads.size(), 0);
    s.started[0] = 1;
    s.locals.assign(p_.locals.size(), 0);
    s.shared.assign(p_.shared.size(), 0);
    s.guard_cache.assign(p_.guards.size(), -1);
    return s;
  }

  bool guard(State& s, GuardId g) const {
    if (s.guard_cache[g] >= 0) return s.guard_cache[g];
    const GuardNode& n = p_.guards[g];
    bool v = true;
    switch (n.kind) {
      case GuardKind::True: v = true; break;
      case GuardKind::Cond: v = guard(s, n.lhs) && ((s.locals[n.local] != 0) == n.positive); break;
      case GuardKind::JoinOk: {
        const ThreadInstance& c = p_.threads[n.thread];
        v = guard(s, n.lhs) && (!guard(s, c.start_guard) || guard(s, c.end_guard));
        break;
      }
      case GuardKind::Or: v = guard(s, n.lhs) || guard(s, n.rhs); break;
    }
    s.guard_cache[g] = v ? 1 : 0;
    return v;
  }

  int64_t eval(const State& s, const Expr& e) const {
    switch (e.kind) {
      case ExprKind::Const: return wrap_int(e.value, width_);
      case ExprKind::Var: return s.locals[e.ref];
      case ExprKind::Nondet: throw InternalError("nondet() left in a normalized expression");
      case ExprKind::Unary: {
        int64_t a = eval(s, e.args[0]);
        return e.op == Op::Not ? (a == 0) : wrap_int(-a, width_);
      }
      case ExprKind::Binary: break;
    }
    int64_t a = eval(s, e.args[0]);
    int64_t b = eval(s, e.args[1]);
    switch (e.op) {
      case Op::Add: return wrap_int(a + b, width_);
      case Op::Sub: return wrap_int(a - b, width_);
      case Op::Mul: return wrap_int(static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b)), width_);
      case Op::Eq: return a == b;
      case Op::Ne: return a != b;
      case Op::Lt: return a < b;
      case Op::Le: return a <= b;
      case Op::Gt: return a > b;
      case Op::Ge: return a >= b;
      case Op::And: return a != 0 && b != 0;
      case Op::Or: return a != 0 || b != 0;
      default: throw InternalError("bad binary operator");
    }
  }

  // Skips statements whose guard is false.
  void skip_disabled(State& s, ThreadId t) const {
    const auto& body = p_.threads[t].body;
    while (s.started[t] && s.pc[t] < body.size() && !guard(s, body[s.pc[t]].guard)) ++s.pc[t];
  }

  bool finished(State& s, ThreadId t) const {
    if (!s.started[t]) return true;  // never spawned on this path
    skip_disabled(s, t);
    return s.pc[t] == p_.threads[t].body.size();
  }

  const Statement* next(State& s, ThreadId t) const {
    skip_disabled(s, t);
    if (!s.started[t] || s.pc[t] >= p_.threads[t].body.size()) return nullptr;
    return &p_.threads[t].body[s.pc[t]];
  }

  // Executes the next (enabled) statement of `t`.
  ScheduleStep execute(State& s, ThreadId t, int64_t nondet = 0) const {
    const Statement& st = p_.threads[t].body[s.pc[t]];
    ScheduleStep out;
    out.thread = t;
    out.stmt = s.pc[t];
    out.thread_name = p_.threads[t].name;
    out.text = st.text;
    switch (st.op) {
      case StmtOp::Read:
        s.locals[st.local] = s.shared[st.shared];
        out.writes.emplace_back(p_.locals[st.local].name, s.locals[st.local]);
        break;
      case StmtOp::Write:
        s.shared[st.shared] = eval(s, st.expr);
        out.writes.emplace_back(p_.shared[st.shared].name, s.shared[st.shared]);
        break;
      case StmtOp::Assign:
        s.locals[st.local] = eval(s, st.expr);
        out.writes.emplace_back(p_.locals[st.local].name, s.locals[st.local]);
        break;
      case StmtOp::Nondet:
        s.locals[st.local] = wrap_int(nondet, width_);
        out.nondet = s.locals[st.local];
        out.writes.emplace_back(p_.locals[st.local].name, s.locals[st.local]);
        break;
      case StmtOp::Assert:
        if (eval(s, st.expr) == 0) {
          s.violated = true;
          s.violation = {t, s.pc[t]};
        }
        break;
      case StmtOp::Assume: break;
      case StmtOp::Spawn: s.started[st.child] = 1; break;
      case StmtOp::Join:
        if (!finished(s, st.child)) throw InternalError("join executed before its thread finished");
        break;
    }
    ++s.pc[t];
    return out;
  }

  // Runs local statements of every thread until each waits on a global
  // statement, a nondet choice, an unfinished join, or its end.
  void advance(State& s, std::vector<ScheduleStep>& trace) const {
    bool progress = true;
    while (progress && !s.violated) {
      progress = false;
      for (ThreadId t = 0; t < p_.threads.size() && !s.violated; ++t) {
        while (const Statement* st = next(s, t)) {
          if (st->is_global() || st->op == StmtOp::Nondet) break;
          if (st->op == StmtOp::Join && !finished(s, st->child)) break;
          trace.push_back(execute(s, t));
          progress = true;
          if (s.violated) break;
        }
      }
    }
  }

  // Every program-order predecessor that runs on this path has run.
  void check_order(const State& s, EventId e) const {
    for (EventId a : p_.po_before[e]) {
      const EventInfo& ev = p_.events[a];
      if (s.started[ev.thread] && s.pc[ev.thread] <= ev.stmt)
        throw InternalError("schedule runs " + p_.event_name(e) + " before " + p_.event_name(a));
    }
  }

  const NormalizedProgram& p_;
  int width_;
};

std::string state_key(const State& s) {
  std::string k;
  auto put = [&](const void* data, std::size_t n) { k.append(static_cast<const char*>(data), n); };
  put(s.pc.data(), s.pc.size() * sizeof(uint32_t));
  put(s.started.data(), s.started.size());
  put(s.locals.data(), s.locals.size() * sizeof(int64_t));
  put(s.shared.data(), s.shared.size() * sizeof(int64_t));
  return k;
}

class Explorer {
 public:
  Explorer(const NormalizedProgram& p, const ExploreOptions& o) : p_(p), o_(o), m_(p, o.width) {}

  ExploreResult run() {
    ExploreResult res;
    State s = m_.initial();
    if (dfs(std::move(s), 0)) {
      res.verdict = OracleVerdict::Unsafe;
      res.schedule.steps = trace_;
      res.schedule.violated = violation_;
    } else {
      res.verdict = unknown_ ? OracleVerdict::Unknown : OracleVerdict::Safe;
    }
    res.states = visited_.size();
    return res;
  }

 private:
  bool dfs(State s, std::size_t depth) {
    const std::size_t mark = trace_.size();
    m_.advance(s, trace_);
    if (s.violated) {
      violation_ = s.violation;
      return true;
    }
    if (!visited_.insert(state_key(s)).second) {
      trace_.resize(mark);
      return false;
    }
    if (visited_.size() > o_.state_budget) {
      unknown_ = true;
      trace_.resize(mark);
      return false;
    }
    const std::size_t base = trace_.size();
    for (ThreadId t = 0; t < p_.threads.size(); ++t) {
      const Statement* st = m_.next(s, t);
      if (!st || st->op != StmtOp::Nondet) continue;
      for (int64_t v : o_.nondet_values) {
        State c = s;
        trace_.push_back(m_.execute(c, t, v));
        if (dfs(std::move(c), depth)) return true;
        trace_.resize(base);
      }
      trace_.resize(mark);
      return false;
    }
    for (ThreadId t = 0; t < p_.threads.size(); ++t) {
      const Statement* st = m_.next(s, t);
      if (!st || !st->is_global()) continue;
      if (depth >= o_.step_bound) {
        unknown_ = true;
        break;
      }
      State c = s;
      m_.check_order(c, st->event);
      trace_.push_back(m_.execute(c, t));
      if (dfs(std::move(c), depth + 1)) return true;
      trace_.resize(base);
    }
    trace_.resize(mark);
    return false;
  }

  const NormalizedProgram& p_;
  const ExploreOptions& o_;
  Machine m_;
  std::vector<ScheduleStep> trace_;
  std::unordered_set<std::string> visited_;
  StmtRef violation_{0, 0};
  bool unknown_ = false;
};

}  // namespace

ExploreResult enumerate_schedules(const NormalizedProgram& p, const ExploreOptions& options) {
  return Explorer(p, options).run();
}

ReplayResult replay(const NormalizedProgram& p, const Schedule& sched, int width) {
  Machine m(p, width);
  State s = m.initial();
  ReplayResult res;
  for (std::size_t i = 0; i < sched.steps.size(); ++i) {
    const ScheduleStep& step = sched.steps[i];
    auto fail = [&](const std::string& why) {
      res.error = "step " + std::to_string(i) + ": " + why;
      return res;
    };
    if (step.thread >= p.threads.size()) return fail("unknown thread");
    const Statement* st = m.next(s, step.thread);
    if (!st) return fail("thread " + p.threads[step.thread].name + " has no enabled statement");
    if (s.pc[step.thread] != step.stmt)
      return fail("expected statement " + std::to_string(s.pc[step.thread]) + " of " + p.threads[step.thread].name +
                  ", got " + std::to_string(step.stmt));
    if (st->op == StmtOp::Join && !m.finished(s, st->child)) return fail("join before the joined thread finished");
    m.execute(s, step.thread, step.nondet);
    if (s.violated) {
      if (i + 1 != sched.steps.size()) return fail("steps continue past a failing assert");
      res.ok = true;
      res.violated = true;
      return res;
    }
  }
  res.ok = true;
  return res;
}

BruteForceResult eog_feasible_bruteforce(const eog::Eog& g, std::size_t max_events) {
  g.validate();
  const std::size_t n = g.events.size();
  if (n > max_events || n > 63) throw std::invalid_argument("EOG too large for exhaustive enumeration");
  std::vector<uint64_t> preds(n, 0);
  for (auto [a, b] : g.po) preds[b] |= uint64_t{1} << a;
  std::vector<std::vector<eog::NodeId>> source(n);
  for (const auto& r : g.rf) {
    preds[r.to] |= uint64_t{1} << r.from;
    source[r.to].push_back(r.from);
  }
  std::map<std::string, int> ids;
  std::vector<int> var(n);
  for (std::size_t i = 0; i < n; ++i) var[i] = ids.emplace(g.events[i].var, static_cast<int>(ids.size())).first->second;

  std::vector<int> last(ids.size(), -1);
  std::vector<eog::NodeId> order;
  std::unordered_set<std::string> failed;
  const uint64_t full = n == 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;

  auto key = [&](uint64_t mask) {
    std::string k(reinterpret_cast<const char*>(&mask), sizeof mask);
    k.append(reinterpret_cast<const char*>(last.data()), last.size() * sizeof(int));
    return k;
  };
  std::function<bool(uint64_t)> dfs = [&](uint64_t mask) -> bool {
    if (mask == full) return true;
    std::string k = key(mask);
    if (failed.count(k)) return false;
    for (eog::NodeId v = 0; v < n; ++v) {
      if ((mask >> v) & 1 || (preds[v] & ~mask) != 0) continue;
      bool ok = true;
      if (g.events[v].type == Access::Read)
        for (eog::NodeId w : source[v]) ok = ok && last[var[v]] == static_cast<int>(w);
      if (!ok) continue;
      int saved = last[var[v]];
      if (g.events[v].type == Access::Write) last[var[v]] = static_cast<int>(v);
      order.push_back(v);
      if (dfs(mask | (uint64_t{1} << v))) return true;
      order.pop_back();
      last[var[v]] = saved;
    }
    failed.insert(std::move(k));
    return false;
  };
  BruteForceResult res;
  res.feasible = dfs(0);
  if (res.feasible) res.order = order;
  return res;
}

}  // namespace mtl::oracle
