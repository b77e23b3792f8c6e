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
#include <utility>
#include <vector>

#include "eog/eog.hpp"
#include "frontend/program.hpp"

namespace mtl::oracle {

// One executed statement of an interleaved run.
struct ScheduleStep {
  ThreadId thread = 0;
  uint32_t stmt = 0;
  int64_t nondet = 0;  // chosen value for nondet statements
  std::string thread_name;
  std::string text;
  std::vector<std::pair<std::string, int64_t>> writes;
};

struct Schedule {
  std::vector<ScheduleStep> steps;
  std::optional<StmtRef> violated;  // the failing assert, if reached
};

std::string to_json(const Schedule& s);

struct ExploreOptions {
  int width = 8;
  std::vector<int64_t> nondet_values{0, 1, 2};
  std::size_t step_bound = 10000;     // global steps along one run
  std::size_t state_budget = 2000000;  // distinct states visited
};

enum class OracleVerdict { Safe, Unsafe, Unknown };

struct ExploreResult {
  OracleVerdict verdict = OracleVerdict::Safe;
  Schedule schedule;  // Unsafe: the violating run
  std::size_t states = 0;
};

// Depth-first search over scheduler choices and nondet values. Local
// statements run eagerly; each global statement is one scheduling step.
ExploreResult enumerate_schedules(const NormalizedProgram& p, const ExploreOptions& options = {});

struct ReplayResult {
  bool ok = false;        // schedule was executable as given
  bool violated = false;  // and ended in a failing assert
  std::string error;
};

// Executes the listed steps in order. Statements whose guard is false may be
// omitted from the schedule; every listed one must be the thread's next
// enabled statement.
ReplayResult replay(const NormalizedProgram& p, const Schedule& s, int width = 8);

struct BruteForceResult {
  bool feasible = false;
  std::vector<eog::NodeId> order;
};

// Enumerates topological extensions with memoized failures. Throws
// std::invalid_argument above `max_events`.
BruteForceResult eog_feasible_bruteforce(const eog::Eog& g, std::size_t max_events = 14);

}  // namespace mtl::oracle
