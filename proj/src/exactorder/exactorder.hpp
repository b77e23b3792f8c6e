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

#include <vector>

#include "eog/eog.hpp"

namespace mtl::exact {

using eog::NodeId;
using sat::Lit;

struct ExactResult {
  bool feasible = false;
  std::vector<NodeId> order;  // feasible: total order over all events
  std::vector<Lit> core;      // infeasible: guard/link literals of the EOG
};

// Encodes the EOG requirements over event clocks in a private solver, with
// every requirement guarded by the guard/link literals it stems from, and
// solves with those literals as assumptions.
ExactResult validate_exact(const eog::Eog& g, uint64_t seed = 0);

// Single clause negating the conjunction of the core.
sat::Clause refine_from_core(const std::vector<Lit>& core);

}  // namespace mtl::exact
