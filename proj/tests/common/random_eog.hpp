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

#include <random>
#include <string>
#include <vector>

#include "eog/eog.hpp"

namespace mtl::testing {

struct EogShape {
  int max_events = 10;
  int max_threads = 4;
  int max_vars = 3;
  double guard_prob = 0.3;
  double cross_po_prob = 0.1;
};

// Random EOG: threads are program-order chains, a few extra forward
// cross-thread edges, every read gets one read-from edge from a random
// write of its variable. Guards and links get distinct literals.
inline eog::Eog random_eog(std::mt19937& rng, const EogShape& shape = {}) {
  using eog::NodeId;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  eog::Eog g;
  const int n = pick(1, shape.max_events);
  const int threads = pick(1, shape.max_threads);
  const int vars = pick(1, shape.max_vars);
  sat::Var next_var = 1;
  std::vector<std::vector<NodeId>> by_var(vars);
  std::vector<int> var_of(n);
  for (int i = 0; i < n; ++i) {
    eog::EogEvent e;
    var_of[i] = pick(0, vars - 1);
    e.var = std::string(1, static_cast<char>('a' + var_of[i]));
    e.type = coin(0.5) ? Access::Write : Access::Read;
    e.thread = static_cast<uint32_t>(pick(0, threads - 1));
    e.name = e.var + std::to_string(i);
    if (coin(shape.guard_prob)) {
      e.guard = sat::Lit::make(next_var++);
      e.guard_name = "g" + std::to_string(i);
    }
    g.events.push_back(e);
  }
  // reads without a write of their variable become writes
  for (int i = 0; i < n; ++i)
    if (g.events[i].type == Access::Write) by_var[var_of[i]].push_back(i);
  for (int i = 0; i < n; ++i)
    if (g.events[i].type == Access::Read && by_var[var_of[i]].empty()) {
      g.events[i].type = Access::Write;
      by_var[var_of[i]].push_back(i);
    }
  std::vector<int> last(threads, -1);
  for (int i = 0; i < n; ++i) {
    int t = static_cast<int>(g.events[i].thread);
    if (last[t] >= 0) g.po.emplace_back(last[t], i);
    last[t] = i;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.events[i].thread != g.events[j].thread && coin(shape.cross_po_prob)) g.po.emplace_back(i, j);
  for (int i = 0; i < n; ++i) {
    if (g.events[i].type != Access::Read) continue;
    const auto& ws = by_var[var_of[i]];
    eog::RfEdge r;
    r.from = ws[pick(0, static_cast<int>(ws.size()) - 1)];
    r.to = i;
    r.sel = sat::Lit::make(next_var++);
    r.name = "s_" + g.events[i].name + "_" + g.events[r.from].name;
    g.rf.push_back(r);
  }
  return g;
}

}  // namespace mtl::testing
