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

#include <map>
#include <optional>
#include <set>

#include "frontend/program.hpp"

namespace mtl {

std::string NormalizedProgram::event_name(EventId e) const {
  const auto& ev = events[e];
  return shared[ev.var].name + std::to_string(ev.ssa_index);
}

namespace {

// Binding of a handle local on the current path.
struct Binding {
  ThreadId thread = kNone;
  bool ambiguous = false;
  friend bool operator==(const Binding&, const Binding&) = default;
};

class Normalizer {
 public:
  Normalizer(const Ast& ast, const NormalizeOptions& opts) : ast_(ast), opts_(opts) {}

  NormalizedProgram run() {
    for (const auto& s : ast_.shared) p_.shared.push_back({s.name, s.init});
    p_.guards.push_back({});
    p_.threads.push_back({"main", kNone, kNone, kGuardTrue, kGuardTrue, {}});
    instance_count_["main"] = 1;
    ctx_.thread = 0;
    ctx_.guard = kGuardTrue;
    for (SharedId v = 0; v < p_.shared.size(); ++v) {
      Statement s;
      s.op = StmtOp::Write;
      s.shared = v;
      s.expr = Expr::constant(p_.shared[v].init);
      s.init = true;
      s.loc = ast_.shared[v].loc;
      s.text = p_.shared[v].name + " = " + print(s.expr) + ";";
      emit(std::move(s));
    }
    block(ast_.main_body);
    p_.threads[0].end_guard = ctx_.guard;
    return std::move(p_);
  }

 private:
  struct Context {
    ThreadId thread = 0;
    GuardId guard = kGuardTrue;
    std::vector<std::map<std::string, LocalId>> scopes;
    std::map<LocalId, Binding> handles;
    std::set<ThreadId> joined;
    Bitset cur;  // events ordered before the current point
  };

  Bitset& cur() {
    ctx_.cur.resize(p_.events.size());
    return ctx_.cur;
  }

  GuardId add_guard(GuardNode n) {
    p_.guards.push_back(n);
    return static_cast<GuardId>(p_.guards.size() - 1);
  }

  LocalId new_local(std::string name, bool temp) {
    p_.locals.push_back({std::move(name), ctx_.thread, temp});
    return static_cast<LocalId>(p_.locals.size() - 1);
  }

  LocalId temp(char tag) {
    return new_local(std::string("$") + tag + std::to_string(++temp_counter_), true);
  }

  std::optional<LocalId> lookup(const std::string& name) const {
    for (auto it = ctx_.scopes.rbegin(); it != ctx_.scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return std::nullopt;
  }

  SharedId shared_id(const std::string& name, SourceLoc loc) const {
    for (SharedId v = 0; v < p_.shared.size(); ++v)
      if (p_.shared[v].name == name) return v;
    throw FrontendError(loc, "undeclared identifier '" + name + "'");
  }

  uint32_t emit(Statement s) {
    auto& body = p_.threads[ctx_.thread].body;
    s.guard = ctx_.guard;
    s.seq = static_cast<uint32_t>(p_.order.size());
    if (s.is_global()) {
      EventInfo ev;
      ev.thread = ctx_.thread;
      ev.stmt = static_cast<uint32_t>(body.size());
      ev.var = s.shared;
      ev.type = s.op == StmtOp::Read ? Access::Read : Access::Write;
      ev.ssa_index = ++ssa_counter_[s.shared];
      ev.init = s.init;
      s.event = static_cast<EventId>(p_.events.size());
      Bitset& before = cur();
      std::vector<EventId> preds;
      for (auto e = before.find_first(); e != Bitset::npos; e = before.find_next(e)) preds.push_back(static_cast<EventId>(e));
      p_.po_before.push_back(std::move(preds));
      p_.events.push_back(ev);
      cur().set(s.event);
    }
    body.push_back(std::move(s));
    uint32_t index = static_cast<uint32_t>(body.size() - 1);
    p_.order.push_back({ctx_.thread, index});
    if (p_.order.size() > opts_.statement_budget)
      throw FrontendError(body.back().loc, "statement budget of " + std::to_string(opts_.statement_budget) +
                                               " exceeded during normalization");
    return index;
  }

  // Rewrites `e` over locals only, emitting one Read per shared access and
  // one Nondet per nondet() call in left-to-right order.
  Expr hoist(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Const: return e;
      case ExprKind::Var: {
        if (auto id = lookup(e.name)) return Expr::local(*id, e.name);
        Statement s;
        s.op = StmtOp::Read;
        s.shared = shared_id(e.name, e.loc);
        s.local = temp('t');
        s.loc = e.loc;
        s.text = p_.locals[s.local].name + " = " + e.name + ";";
        LocalId t = s.local;
        emit(std::move(s));
        return Expr::local(t, p_.locals[t].name);
      }
      case ExprKind::Nondet: {
        Statement s;
        s.op = StmtOp::Nondet;
        s.local = temp('n');
        s.nondet_site = p_.nondet_sites++;
        s.loc = e.loc;
        s.text = p_.locals[s.local].name + " = nondet();";
        LocalId t = s.local;
        emit(std::move(s));
        return Expr::local(t, p_.locals[t].name);
      }
      case ExprKind::Unary: return Expr::unary(e.op, hoist(e.args[0]), e.loc);
      case ExprKind::Binary: {
        Expr lhs = hoist(e.args[0]);
        Expr rhs = hoist(e.args[1]);
        return Expr::binary(e.op, std::move(lhs), std::move(rhs), e.loc);
      }
    }
    return e;
  }

  LocalId materialize(const Expr& cond, char tag, SourceLoc loc) {
    Statement s;
    s.op = StmtOp::Assign;
    s.local = temp(tag);
    s.expr = cond;
    s.loc = loc;
    s.text = p_.locals[s.local].name + " = " + print(cond) + ";";
    LocalId t = s.local;
    emit(std::move(s));
    return t;
  }

  void block(const std::vector<Stmt>& body) {
    ctx_.scopes.emplace_back();
    for (const auto& s : body) stmt(s);
    ctx_.scopes.pop_back();
  }

  Binding& handle(const std::string& name, SourceLoc loc) {
    auto id = lookup(name);
    if (!id) throw FrontendError(loc, "undeclared identifier '" + name + "'");
    return ctx_.handles[*id];
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::LocalDecl: {
        Expr init = s.has_expr ? hoist(s.expr) : Expr::constant(0);
        LocalId id = new_local(s.target, false);
        ctx_.scopes.back()[s.target] = id;
        Statement st;
        st.op = StmtOp::Assign;
        st.local = id;
        st.expr = std::move(init);
        st.loc = s.loc;
        st.text = s.target + " = " + print(st.expr) + ";";
        emit(std::move(st));
        return;
      }
      case StmtKind::Assign: {
        Expr rhs = hoist(s.expr);
        Statement st;
        st.loc = s.loc;
        st.text = s.target + " = " + print(rhs) + ";";
        st.expr = std::move(rhs);
        if (auto id = lookup(s.target)) {
          st.op = StmtOp::Assign;
          st.local = *id;
        } else {
          st.op = StmtOp::Write;
          st.shared = shared_id(s.target, s.loc);
        }
        emit(std::move(st));
        return;
      }
      case StmtKind::If: {
        LocalId c = materialize(hoist(s.expr), 'c', s.loc);
        GuardId saved = ctx_.guard;
        GuardId then_start = add_guard({GuardKind::Cond, saved, kGuardTrue, c, true, kNone});
        GuardId else_start = add_guard({GuardKind::Cond, saved, kGuardTrue, c, false, kNone});
        auto before = ctx_.handles;
        const Bitset snapshot = cur();
        const std::size_t mark = p_.events.size();
        ctx_.guard = then_start;
        block(s.body);
        GuardId then_end = ctx_.guard;
        auto after_then = ctx_.handles;
        Bitset then_cur = cur();
        ctx_.handles = before;
        ctx_.cur = snapshot;
        ctx_.guard = else_start;
        block(s.else_body);
        GuardId else_end = ctx_.guard;
        // Keep what both paths ordered, plus anything created inside a branch
        // (such events never run on the other path).
        Bitset else_cur = cur();
        then_cur.resize(else_cur.size());
        Bitset inside(else_cur.size());
        for (std::size_t e = mark; e < inside.size(); ++e) inside.set(e);
        ctx_.cur = (then_cur & else_cur) | ((then_cur | else_cur) & inside);
        if (then_end == then_start && else_end == else_start) {
          ctx_.guard = saved;
        } else {
          ctx_.guard = add_guard({GuardKind::Or, then_end, else_end, kNone, true, kNone});
        }
        merge_handles(after_then);
        return;
      }
      case StmtKind::While:
        throw FrontendError(s.loc, "loop reached normalization; run inline_and_unwind first");
      case StmtKind::Assert: {
        Statement st;
        st.op = StmtOp::Assert;
        st.expr = hoist(s.expr);
        st.loc = s.loc;
        st.unwinding = s.unwinding;
        st.text = "assert(" + print(st.expr) + ");";
        emit(std::move(st));
        ++p_.assert_count;
        return;
      }
      case StmtKind::Assume: {
        LocalId a = materialize(hoist(s.expr), 'a', s.loc);
        Statement st;
        st.op = StmtOp::Assume;
        st.expr = Expr::local(a, p_.locals[a].name);
        st.loc = s.loc;
        st.unwinding = s.unwinding;
        st.text = "assume(" + p_.locals[a].name + ");";
        emit(std::move(st));
        ctx_.guard = add_guard({GuardKind::Cond, ctx_.guard, kGuardTrue, a, true, kNone});
        return;
      }
      case StmtKind::Spawn: {
        const ThreadDef* def = ast_.find_thread(s.thread_name);
        if (!def) throw FrontendError(s.loc, "spawn of undefined thread '" + s.thread_name + "'");
        Binding& h = handle(s.target, s.loc);
        ThreadId child = static_cast<ThreadId>(p_.threads.size());
        int n = ++instance_count_[def->name];
        ThreadInstance inst;
        inst.name = n == 1 ? def->name : def->name + "#" + std::to_string(n);
        inst.parent = ctx_.thread;
        inst.start_guard = ctx_.guard;
        Statement st;
        st.op = StmtOp::Spawn;
        st.child = child;
        st.loc = s.loc;
        st.text = s.target + " = spawn " + inst.name + ";";
        p_.threads.push_back(std::move(inst));
        h = Binding{child, false};
        p_.threads[child].spawn_stmt = emit(std::move(st));

        Context saved = std::move(ctx_);
        ctx_ = Context{};
        ctx_.thread = child;
        ctx_.guard = p_.threads[child].start_guard;
        ctx_.cur = saved.cur;
        block(def->body);
        p_.threads[child].end_guard = ctx_.guard;
        end_cur_[child] = cur();
        ctx_ = std::move(saved);
        return;
      }
      case StmtKind::Join: {
        Binding h = handle(s.target, s.loc);
        if (h.ambiguous)
          throw FrontendError(s.loc, "handle '" + s.target + "' may refer to different threads at this join");
        if (h.thread == kNone) throw FrontendError(s.loc, "join of a never-spawned handle '" + s.target + "'");
        if (!ctx_.joined.insert(h.thread).second)
          throw FrontendError(s.loc, "thread '" + p_.threads[h.thread].name + "' joined more than once");
        Statement st;
        st.op = StmtOp::Join;
        st.child = h.thread;
        st.loc = s.loc;
        st.text = "join " + s.target + ";";
        emit(std::move(st));
        Bitset child_cur = end_cur_[h.thread];
        child_cur.resize(p_.events.size());
        cur() |= child_cur;
        ctx_.guard = add_guard({GuardKind::JoinOk, ctx_.guard, kGuardTrue, kNone, true, h.thread});
        return;
      }
    }
  }

  void merge_handles(const std::map<LocalId, Binding>& then_side) {
    std::map<LocalId, Binding> merged;
    std::set<LocalId> keys;
    for (const auto& [k, _] : then_side) keys.insert(k);
    for (const auto& [k, _] : ctx_.handles) keys.insert(k);
    for (LocalId k : keys) {
      Binding a = then_side.count(k) ? then_side.at(k) : Binding{};
      Binding b = ctx_.handles.count(k) ? ctx_.handles.at(k) : Binding{};
      if (a == b) {
        merged[k] = a;
      } else if (!a.ambiguous && !b.ambiguous && (a.thread == kNone || b.thread == kNone)) {
        merged[k] = Binding{a.thread == kNone ? b.thread : a.thread, false};
      } else {
        merged[k] = Binding{kNone, true};
      }
    }
    ctx_.handles = std::move(merged);
  }

  const Ast& ast_;
  const NormalizeOptions& opts_;
  NormalizedProgram p_;
  Context ctx_;
  std::map<SharedId, uint32_t> ssa_counter_;
  std::map<std::string, int> instance_count_;
  std::map<ThreadId, Bitset> end_cur_;
  uint32_t temp_counter_ = 0;
};

int count_shared_refs(const NormalizedProgram& p, const Expr& e) {
  int n = 0;
  if (e.kind == ExprKind::Var) {
    if (e.ref >= p.locals.size()) ++n;
    for (const auto& v : p.shared)
      if (v.name == e.name) ++n;
  }
  for (const auto& a : e.args) n += count_shared_refs(p, a);
  return n;
}

}  // namespace

NormalizedProgram normalize(const Ast& ast, const NormalizeOptions& options) {
  return Normalizer(ast, options).run();
}

int shared_access_count(const NormalizedProgram& p, const Statement& s) {
  return (s.is_global() ? 1 : 0) + count_shared_refs(p, s.expr);
}

ProgramOrder program_order(const NormalizedProgram& p) {
  const std::size_t n = p.events.size();
  ProgramOrder po;
  po.before.assign(n, Bitset(n));
  for (EventId e = 0; e < n; ++e)
    for (EventId a : p.po_before[e]) po.before[e].set(a);
  return po;
}

std::vector<std::pair<EventId, EventId>> ProgramOrder::covering_pairs() const {
  std::vector<std::pair<EventId, EventId>> out;
  for (EventId b = 0; b < before.size(); ++b) {
    Bitset direct = before[b];
    for (auto c = before[b].find_first(); c != Bitset::npos; c = before[b].find_next(c)) direct -= before[c];
    for (auto a = direct.find_first(); a != Bitset::npos; a = direct.find_next(a))
      out.emplace_back(static_cast<EventId>(a), b);
  }
  return out;
}

}  // namespace mtl
