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

#include "encoder/encoder.hpp"

#include <json.hpp>

namespace mtl::enc {

std::size_t EncodedProgram::abstraction_clauses() const {
  return formula.count(Component::Init) + formula.count(Component::Rho) + formula.count(Component::Zeta) +
         formula.count(Component::Err);
}

std::string EncodedProgram::symbols_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (sat::Var v = 0; v < formula.num_vars(); ++v)
    if (!formula.symbol(v).empty()) j[std::to_string(v + 1)] = formula.symbol(v);
  return j.dump(2);
}

EncodedProgram ssa_transform(const NormalizedProgram& p, const EncodeOptions& options) {
  if (options.width < 2 || options.width > 32) throw std::invalid_argument("integer width must be in [2, 32]");
  EncodedProgram ep;
  ep.program = &p;
  ep.options = options;
  ep.po = program_order(p);
  ep.events.resize(p.events.size());
  for (EventId e = 0; e < p.events.size(); ++e) ep.events[e].name = p.event_name(e);
  for (EventId r = 0; r < p.events.size(); ++r) {
    if (p.events[r].type != Access::Read) continue;
    for (EventId w = 0; w < p.events.size(); ++w) {
      if (p.events[w].type != Access::Write || p.events[w].var != p.events[r].var) continue;
      if (options.link_pruning && ep.po.ordered(r, w)) continue;
      ep.events[r].candidates.push_back(w);
    }
    if (ep.events[r].candidates.empty()) throw InternalError("read " + ep.events[r].name + " has no candidate writer");
  }
  ep.stmts.resize(p.threads.size());
  for (ThreadId t = 0; t < p.threads.size(); ++t) ep.stmts[t].resize(p.threads[t].body.size());
  return ep;
}

namespace {

class RhoBuilder {
 public:
  explicit RhoBuilder(EncodedProgram& ep)
      : ep_(ep), p_(*ep.program), c_(ep.formula, ep.options.width), guard_lits_(p_.guards.size(), sat::kUndefLit),
        locals_(p_.locals.size()) {}

  void run() {
    for (StmtRef r : p_.order) statement(r);
  }

 private:
  Lit guard(GuardId g) {
    if (guard_lits_[g].defined()) return guard_lits_[g];
    // Nodes only refer to older nodes, so fill in creation order.
    for (GuardId i = 0; i <= g; ++i) {
      if (guard_lits_[i].defined()) continue;
      const GuardNode& n = p_.guards[i];
      Lit l;
      switch (n.kind) {
        case GuardKind::True: l = c_.t(); break;
        case GuardKind::Cond: {
          Lit nz = c_.nonzero(local(n.local));
          l = c_.and_(guard_lits_[n.lhs], n.positive ? nz : ~nz);
          break;
        }
        case GuardKind::JoinOk: {
          const ThreadInstance& child = p_.threads[n.thread];
          Lit done = c_.or_(~guard_lits_[child.start_guard], guard_lits_[child.end_guard]);
          l = c_.and_(guard_lits_[n.lhs], done);
          break;
        }
        case GuardKind::Or: l = c_.or_(guard_lits_[n.lhs], guard_lits_[n.rhs]); break;
      }
      guard_lits_[i] = l;
    }
    return guard_lits_[g];
  }

  const Bits& local(LocalId id) {
    if (locals_[id].empty()) locals_[id] = c_.constant(0);
    return locals_[id];
  }

  void set_local(LocalId id, Lit g, Bits v) {
    if (locals_[id].empty())
      locals_[id] = std::move(v);
    else
      locals_[id] = c_.ite(g, v, locals_[id]);
  }

  Bits eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Const: return c_.constant(wrap_int(e.value, c_.width()));
      case ExprKind::Var: return local(e.ref);
      case ExprKind::Nondet: throw InternalError("nondet() left in a normalized expression");
      case ExprKind::Unary: {
        Bits a = eval(e.args[0]);
        if (e.op == Op::Not) return c_.from_bool(~c_.nonzero(a));
        return c_.neg(a);
      }
      case ExprKind::Binary: break;
    }
    Bits a = eval(e.args[0]);
    Bits b = eval(e.args[1]);
    switch (e.op) {
      case Op::Add: return c_.add(a, b);
      case Op::Sub: return c_.sub(a, b);
      case Op::Mul: return c_.mul(a, b);
      case Op::Eq: return c_.from_bool(c_.eq(a, b));
      case Op::Ne: return c_.from_bool(~c_.eq(a, b));
      case Op::Lt: return c_.from_bool(c_.slt(a, b));
      case Op::Le: return c_.from_bool(~c_.slt(b, a));
      case Op::Gt: return c_.from_bool(c_.slt(b, a));
      case Op::Ge: return c_.from_bool(~c_.slt(a, b));
      case Op::And: return c_.from_bool(c_.and_(c_.nonzero(a), c_.nonzero(b)));
      case Op::Or: return c_.from_bool(c_.or_(c_.nonzero(a), c_.nonzero(b)));
      default: throw InternalError("bad binary operator");
    }
  }

  void statement(StmtRef r) {
    const Statement& s = p_.stmt(r);
    StmtEnc& out = ep_.stmts[r.thread][r.index];
    c_.set_component(Component::Rho);
    out.guard = guard(s.guard);
    switch (s.op) {
      case StmtOp::Read: {
        EventEnc& ev = ep_.events[s.event];
        ev.guard = out.guard;
        ev.value = c_.fresh(ev.name);
        out.value = ev.value;
        set_local(s.local, out.guard, ev.value);
        break;
      }
      case StmtOp::Write: {
        EventEnc& ev = ep_.events[s.event];
        ev.guard = out.guard;
        if (s.init) {
          c_.set_component(Component::Init);
          ev.value = c_.fresh(ev.name);
          c_.equate(ev.value, c_.constant(wrap_int(s.expr.value, c_.width())));
        } else {
          Bits v = eval(s.expr);
          ev.value = c_.fresh(ev.name);
          c_.equate(ev.value, v);
        }
        out.value = ev.value;
        break;
      }
      case StmtOp::Assign: {
        Bits v = eval(s.expr);
        out.value = v;
        set_local(s.local, out.guard, std::move(v));
        break;
      }
      case StmtOp::Nondet: {
        Bits v = c_.fresh(p_.locals[s.local].name);
        out.value = v;
        set_local(s.local, out.guard, std::move(v));
        break;
      }
      case StmtOp::Assert: {
        Bits v = eval(s.expr);
        c_.set_component(Component::Err);
        Lit holds = c_.nonzero(v);
        out.violation = c_.and_(out.guard, ~holds);
        ep_.violations.push_back(out.violation);
        break;
      }
      case StmtOp::Assume:
      case StmtOp::Spawn:
      case StmtOp::Join: break;
    }
  }

  EncodedProgram& ep_;
  const NormalizedProgram& p_;
  Circuit c_;
  std::vector<Lit> guard_lits_;
  std::vector<Bits> locals_;
};

}  // namespace

void encode_abstraction(EncodedProgram& ep) {
  RhoBuilder(ep).run();
  const NormalizedProgram& p = *ep.program;
  Circuit c(ep.formula, ep.options.width);
  c.set_component(Component::Zeta);
  Formula& f = ep.formula;
  for (EventId r = 0; r < ep.events.size(); ++r) {
    if (p.events[r].type != Access::Read) continue;
    EventEnc& rd = ep.events[r];
    sat::Clause at_least_one;
    if (!f.is_const(rd.guard)) at_least_one.push_back(~rd.guard);
    for (EventId w : rd.candidates) {
      const EventEnc& wr = ep.events[w];
      Link link;
      link.var = p.events[r].var;
      link.writer = w;
      link.reader = r;
      link.name = "s_" + p.shared[link.var].name + "_" + std::to_string(p.events[r].ssa_index) + "_" +
                  std::to_string(p.events[w].ssa_index);
      link.sel = f.new_lit(link.name);
      c.equate_if(link.sel, rd.value, wr.value);
      if (!f.is_const(wr.guard)) c.clause({~link.sel, wr.guard});
      if (!f.is_const(rd.guard)) c.clause({~link.sel, rd.guard});
      at_least_one.push_back(link.sel);
      rd.links.push_back(static_cast<uint32_t>(ep.links.size()));
      ep.links.push_back(std::move(link));
    }
    c.clause(std::move(at_least_one));
    for (std::size_t i = 0; i < rd.links.size(); ++i)
      for (std::size_t j = i + 1; j < rd.links.size(); ++j)
        c.clause({~ep.links[rd.links[i]].sel, ~ep.links[rd.links[j]].sel});
  }
}

void encode_error(EncodedProgram& ep) {
  sat::Clause any;
  for (Lit v : ep.violations)
    if (v != ep.formula.falsity()) any.push_back(v);
  ep.formula.add(Component::Err, std::move(any));
}

void encode_scheduling(EncodedProgram& ep) {
  if (ep.has_scheduling) return;
  ep.has_scheduling = true;
  const NormalizedProgram& p = *ep.program;
  const std::size_t n = ep.events.size();
  int width = 1;
  while ((std::size_t{1} << width) < n) ++width;
  Formula& f = ep.formula;
  Circuit c(f, width);
  c.set_component(Component::Xi);
  std::vector<Bits> clk(n);
  for (EventId e = 0; e < n; ++e) clk[e] = c.fresh("clk(" + ep.events[e].name + ")");
  auto guarded = [&](sat::Clause cl, std::initializer_list<Lit> guards) {
    for (Lit g : guards)
      if (!f.is_const(g)) cl.push_back(~g);
    c.clause(std::move(cl));
  };
  for (EventId b = 0; b < n; ++b) {
    const Bitset& before = ep.po.before[b];
    for (auto a = before.find_first(); a != Bitset::npos; a = before.find_next(a))
      guarded({c.ult(clk[a], clk[b])}, {ep.events[a].guard, ep.events[b].guard});
  }
  for (const Link& l : ep.links) {
    c.clause({~l.sel, c.ult(clk[l.writer], clk[l.reader])});
    for (EventId w2 = 0; w2 < n; ++w2) {
      if (w2 == l.writer || p.events[w2].type != Access::Write || p.events[w2].var != l.var) continue;
      guarded({~l.sel, c.ult(clk[w2], clk[l.writer]), c.ult(clk[l.reader], clk[w2])}, {ep.events[w2].guard});
    }
  }
}

EncodedProgram encode(const NormalizedProgram& p, const EncodeOptions& options) {
  EncodedProgram ep = ssa_transform(p, options);
  encode_abstraction(ep);
  encode_error(ep);
  return ep;
}

}  // namespace mtl::enc
