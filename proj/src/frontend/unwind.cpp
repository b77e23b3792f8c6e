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

#include <functional>
#include <map>

#include "frontend/ast.hpp"

namespace mtl {
namespace {

class Unwinder {
 public:
  explicit Unwinder(const UnwindOptions& o) : opts_(o) {}

  std::vector<Stmt> body(const std::vector<Stmt>& in) {
    std::vector<Stmt> out;
    out.reserve(in.size());
    for (const auto& s : in) {
      if (s.kind == StmtKind::While) {
        out.push_back(unroll(s, opts_.depth));
      } else if (s.kind == StmtKind::If) {
        Stmt c = s;
        c.body = body(s.body);
        c.else_body = body(s.else_body);
        out.push_back(std::move(c));
      } else {
        out.push_back(s);
      }
      if (++produced_ > opts_.statement_budget)
        throw FrontendError(s.loc, "statement budget of " + std::to_string(opts_.statement_budget) +
                                       " exceeded while unwinding");
    }
    return out;
  }

 private:
  // while (c) { s } at depth k  ==>  if (c) { s; <depth k-1> }, depth 0 being
  // the unwinding assumption !c.
  Stmt unroll(const Stmt& loop, int k) {
    if (k == 0) {
      Stmt stop;
      stop.kind = opts_.unwinding_assertions ? StmtKind::Assert : StmtKind::Assume;
      stop.expr = Expr::unary(Op::Not, loop.expr, loop.loc);
      stop.has_expr = true;
      stop.unwinding = true;
      stop.loc = loop.loc;
      ++produced_;
      return stop;
    }
    Stmt branch;
    branch.kind = StmtKind::If;
    branch.expr = loop.expr;
    branch.has_expr = true;
    branch.loc = loop.loc;
    branch.body = body(loop.body);
    branch.body.push_back(unroll(loop, k - 1));
    return branch;
  }

  const UnwindOptions& opts_;
  std::size_t produced_ = 0;
};

void collect_spawns(const std::vector<Stmt>& body, std::vector<const Stmt*>& out) {
  for (const auto& s : body) {
    if (s.kind == StmtKind::Spawn) out.push_back(&s);
    collect_spawns(s.body, out);
    collect_spawns(s.else_body, out);
  }
}

std::size_t count_stmts(const std::vector<Stmt>& body) {
  std::size_t n = 0;
  for (const auto& s : body) n += 1 + count_stmts(s.body) + count_stmts(s.else_body);
  return n;
}

}  // namespace

Ast inline_and_unwind(const Ast& ast, const UnwindOptions& options) {
  if (options.depth < 1) throw FrontendError({}, "unwind depth must be >= 1");

  // Thread bodies are instantiated once per spawn during normalization, so the
  // spawn graph must be acyclic and the instantiated size bounded.
  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> mark;
  std::map<std::string, std::size_t> cost;
  Ast out;
  out.shared = ast.shared;
  Unwinder unwinder(options);
  for (const auto& t : ast.threads) out.threads.push_back({t.name, unwinder.body(t.body), t.loc});
  out.main_body = unwinder.body(ast.main_body);

  std::function<std::size_t(const std::vector<Stmt>&)> instantiated;
  std::function<std::size_t(const ThreadDef&, SourceLoc)> visit = [&](const ThreadDef& t, SourceLoc at) {
    auto& m = mark[t.name];
    if (m == Mark::Active) throw FrontendError(at, "recursion detected: thread '" + t.name + "' spawns itself");
    if (m == Mark::Done) return cost[t.name];
    m = Mark::Active;
    std::size_t c = instantiated(t.body);
    m = Mark::Done;
    return cost[t.name] = c;
  };
  instantiated = [&](const std::vector<Stmt>& body) {
    std::size_t n = count_stmts(body);
    std::vector<const Stmt*> spawns;
    collect_spawns(body, spawns);
    for (const Stmt* s : spawns) {
      n += visit(*out.find_thread(s->thread_name), s->loc);
      if (n > options.statement_budget)
        throw FrontendError(s->loc, "statement budget of " + std::to_string(options.statement_budget) +
                                        " exceeded by thread instantiation");
    }
    return n;
  };
  for (const auto& t : out.threads) visit(t, t.loc);
  instantiated(out.main_body);
  return out;
}

}  // namespace mtl
