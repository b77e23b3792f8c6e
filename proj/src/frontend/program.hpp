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

#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "frontend/ast.hpp"

namespace mtl {

using LocalId = uint32_t;
using SharedId = uint32_t;
using ThreadId = uint32_t;
using EventId = uint32_t;
using GuardId = uint32_t;

inline constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();
inline constexpr GuardId kGuardTrue = 0;

enum class Access { Read, Write };

struct SharedVar {
  std::string name;
  int64_t init = 0;
};

struct LocalVar {
  std::string name;
  ThreadId thread = 0;
  bool temp = false;  // introduced by normalization, assigned exactly once
};

// Path conditions form a DAG shared by all threads. A Cond node is
// `parent && (local != 0) == positive`, JoinOk is `parent && (child was never
// spawned || child ran to completion)`, Or merges two branch exits.
enum class GuardKind { True, Cond, JoinOk, Or };

struct GuardNode {
  GuardKind kind = GuardKind::True;
  GuardId lhs = kGuardTrue;
  GuardId rhs = kGuardTrue;
  LocalId local = kNone;
  bool positive = true;
  ThreadId thread = kNone;
};

// Normalized statements. Read/Write are the global statements (exactly one
// shared access, one event each); everything else touches locals only.
enum class StmtOp { Read, Write, Assign, Nondet, Assert, Assume, Spawn, Join };

struct Statement {
  StmtOp op = StmtOp::Assign;
  GuardId guard = kGuardTrue;
  LocalId local = kNone;    // Read/Assign/Nondet target
  SharedId shared = kNone;  // Read source / Write target
  Expr expr;                // over locals; Write/Assign rhs, Assert/Assume condition
  ThreadId child = kNone;   // Spawn/Join
  EventId event = kNone;    // Read/Write
  uint32_t nondet_site = kNone;
  uint32_t seq = 0;         // global creation order (topological for program order)
  bool init = false;        // initialization write of main
  bool unwinding = false;   // assertion/assumption created by loop unwinding
  std::string text;
  SourceLoc loc;

  bool is_global() const { return op == StmtOp::Read || op == StmtOp::Write; }
};

struct ThreadInstance {
  std::string name;
  ThreadId parent = kNone;
  uint32_t spawn_stmt = kNone;  // index in parent body
  GuardId start_guard = kGuardTrue;
  GuardId end_guard = kGuardTrue;
  std::vector<Statement> body;
};

struct EventInfo {
  ThreadId thread = 0;
  uint32_t stmt = 0;
  SharedId var = 0;
  Access type = Access::Read;
  uint32_t ssa_index = 0;  // per-variable numbering starting at 1 (the init write)
  bool init = false;
};

struct StmtRef {
  ThreadId thread;
  uint32_t index;
};

struct NormalizedProgram {
  std::vector<SharedVar> shared;
  std::vector<LocalVar> locals;
  std::vector<GuardNode> guards;  // guards[0] is True
  std::vector<ThreadInstance> threads;  // threads[0] is main
  std::vector<EventInfo> events;
  std::vector<StmtRef> order;  // all statements by creation sequence
  uint32_t nondet_sites = 0;
  uint32_t assert_count = 0;
  // Events ordered before each event on every path through which both run.
  std::vector<std::vector<EventId>> po_before;

  const Statement& stmt(StmtRef r) const { return threads[r.thread].body[r.index]; }
  const Statement& stmt_of(EventId e) const { return threads[events[e].thread].body[events[e].stmt]; }
  std::string event_name(EventId e) const;
};

struct NormalizeOptions {
  std::size_t statement_budget = 200000;
};

// Lowers a loop-free AST: instantiates spawned thread bodies, hoists shared
// accesses and nondet() into single-access statements (left to right), and
// turns control flow into guarded straight-line code.
NormalizedProgram normalize(const Ast& ast, const NormalizeOptions& options = {});

// Number of shared accesses the statement performs, found by scanning its
// expression for shared names (0 or 1 once normalized).
int shared_access_count(const NormalizedProgram& p, const Statement& s);

using Bitset = boost::dynamic_bitset<uint64_t>;

// Program order over events; before[e] holds every event ordered before e.
// Branches make the relation path sensitive: after an if, events that only
// the then-branch ordered (a join there) are not ordered before the merge,
// while events created inside either branch are. The stored relation is
// transitive along every single execution path, which is all its consumers
// use (they only ever compare events that run together).
struct ProgramOrder {
  std::vector<Bitset> before;

  bool ordered(EventId a, EventId b) const { return before[b].test(a); }
  std::size_t size() const { return before.size(); }
  // Pairs (a, b) of the transitive reduction.
  std::vector<std::pair<EventId, EventId>> covering_pairs() const;
};

ProgramOrder program_order(const NormalizedProgram& p);

}  // namespace mtl
