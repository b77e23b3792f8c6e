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

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "frontend/program.hpp"
#include "sat/solver.hpp"

namespace mtl::enc {
struct EncodedProgram;
}

namespace mtl::eog {

using sat::Lit;
using NodeId = uint32_t;

struct EogEvent {
  std::string name;
  std::string var;
  Access type = Access::Read;
  uint32_t thread = 0;
  Lit guard;  // undefined: the event is unconditional
  std::string guard_name;
  EventId origin = kNone;  // event of the encoded program, if any
};

struct RfEdge {
  NodeId from = 0;  // write
  NodeId to = 0;    // read
  Lit sel;
  std::string name;
};

// Event order graph of one counterexample.
struct Eog {
  std::vector<EogEvent> events;
  std::vector<std::pair<NodeId, NodeId>> po;
  std::vector<RfEdge> rf;

  // Human-readable name of a guard or link literal ("?" if unknown).
  std::string lit_name(Lit l) const;
  // Structural sanity: indices in range, rf var/type side conditions.
  void validate() const;
};

// Events whose guard is true in `model`, with program order restricted to
// them and read-from edges for every true link literal.
Eog build_eog(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model);

// A sorted set of guard/link literals.
using Reason = std::vector<Lit>;

enum class Worklist { Fifo, Lifo };

struct ClosureOptions {
  std::size_t reason_cap = 32;        // antichain size per order
  std::size_t work_budget = 4000000;  // reason combinations before single-reason mode
  Worklist policy = Worklist::Fifo;
};

enum class ClosureVerdict { Infeasible, NotSure };

struct ClosureOutcome {
  ClosureVerdict verdict = ClosureVerdict::NotSure;
  std::vector<NodeId> conflicts;  // events e with e < e
  std::size_t node_count = 0;
  // Derived relation: before[b] holds every a with a < b.
  std::vector<Bitset> before;
  std::unordered_map<uint64_t, std::vector<Reason>> reasons;
  bool reasons_truncated = false;

  bool ordered(NodeId a, NodeId b) const { return before[b].test(a); }
  const std::vector<Reason>& reasons_of(NodeId a, NodeId b) const;
  std::vector<std::pair<NodeId, NodeId>> orders() const;
};

// Rules 1-3 to a fixpoint with core kernel reasons per order.
ClosureOutcome closure(const Eog& g, const ClosureOptions& options = {});

// One clause per core kernel reason of the conflict events.
std::vector<sat::Clause> refine(const ClosureOutcome& outcome);

// Inserts `r` into an antichain unless a subset is present; drops supersets.
// Returns false if `r` was subsumed.
bool antichain_insert(std::vector<Reason>& chain, Reason r);

// Checks a total order of all events against the EOG requirements: program
// order, read-from and no intervening write of the same variable.
bool satisfies_requirements(const Eog& g, const std::vector<NodeId>& order);

std::string to_json(const Eog& g);
Eog eog_from_json(const std::string& text);

}  // namespace mtl::eog
