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

#include "exactorder/exactorder.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "encoder/bitblast.hpp"

namespace mtl::exact {

ExactResult validate_exact(const eog::Eog& g, uint64_t seed) {
  g.validate();
  const std::size_t n = g.events.size();
  ExactResult res;
  if (n == 0) {
    res.feasible = true;
    return res;
  }
  int width = 1;
  while ((std::size_t{1} << width) < n) ++width;

  enc::Formula f;
  enc::Circuit c(f, width);
  c.set_component(enc::Component::Xi);
  // Each EOG literal gets a private assumption variable.
  std::map<uint32_t, Lit> local;  // EOG literal code -> private literal
  std::vector<Lit> originals;
  auto lit = [&](Lit l) -> Lit {
    if (!l.defined()) return f.truth();
    auto it = local.find(l.x);
    if (it != local.end()) return it->second;
    Lit p = f.new_lit();
    local.emplace(l.x, p);
    originals.push_back(l);
    return p;
  };
  std::vector<enc::Bits> clk(n);
  for (NodeId e = 0; e < n; ++e) clk[e] = c.fresh("clk" + std::to_string(e));
  for (NodeId e = 0; e < n; ++e) lit(g.events[e].guard);
  for (const auto& r : g.rf) lit(r.sel);

  for (auto [a, b] : g.po) {
    Lit both = c.and_(lit(g.events[a].guard), lit(g.events[b].guard));
    c.clause({~both, c.ult(clk[a], clk[b])});
  }
  for (const auto& r : g.rf) {
    Lit s = lit(r.sel);
    c.clause({~s, c.ult(clk[r.from], clk[r.to])});
    for (NodeId w = 0; w < n; ++w) {
      if (w == r.from || g.events[w].type != Access::Write || g.events[w].var != g.events[r.from].var) continue;
      Lit gw = lit(g.events[w].guard);
      sat::Clause cl{~s, c.ult(clk[w], clk[r.from]), c.ult(clk[r.to], clk[w])};
      if (gw != f.truth()) cl.push_back(~gw);
      c.clause(std::move(cl));
    }
  }

  sat::Solver solver(sat::SolverOptions{.seed = seed});
  f.load(solver);
  std::vector<Lit> assumptions;
  for (Lit l : originals) assumptions.push_back(local.at(l.x));
  if (solver.solve(assumptions) == sat::Status::Sat) {
    res.feasible = true;
    std::vector<int64_t> value(n);
    for (NodeId e = 0; e < n; ++e) {
      uint64_t u = 0;
      for (int i = 0; i < width; ++i)
        if (solver.model_true(clk[e][i])) u |= uint64_t{1} << i;
      value[e] = static_cast<int64_t>(u);
    }
    res.order.resize(n);
    std::iota(res.order.begin(), res.order.end(), 0);
    std::stable_sort(res.order.begin(), res.order.end(), [&](NodeId a, NodeId b) { return value[a] < value[b]; });
    return res;
  }
  std::map<uint32_t, Lit> back;
  for (const auto& [orig, p] : local) back.emplace(p.x, Lit{orig});
  for (Lit p : solver.core()) res.core.push_back(back.at(p.x));
  std::sort(res.core.begin(), res.core.end());
  if (res.core.empty()) throw InternalError("order requirements unsatisfiable without any assumption");
  return res;
}

sat::Clause refine_from_core(const std::vector<Lit>& core) {
  if (core.empty()) throw InternalError("empty unsat core");
  sat::Clause c;
  for (Lit l : core) c.push_back(~l);
  return c;
}

}  // namespace mtl::exact
