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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "common/random_eog.hpp"
#include "eog/eog.hpp"
#include "exactorder/exactorder.hpp"
#include "helpers.hpp"
#include "oracle/oracle.hpp"

namespace mtl::eog {
namespace {

using sat::Lit;
using OrderSet = std::set<std::pair<NodeId, NodeId>>;

// Small builder for hand-made graphs; literal numbers follow creation order.
struct Builder {
  Eog g;
  sat::Var next = 1;
  NodeId ev(const std::string& name, Access type, uint32_t thread) {
    EogEvent e;
    e.name = name;
    e.var = name.substr(0, 1);
    e.type = type;
    e.thread = thread;
    g.events.push_back(e);
    return static_cast<NodeId>(g.events.size() - 1);
  }
  void po(NodeId a, NodeId b) { g.po.emplace_back(a, b); }
  Lit rf(NodeId w, NodeId r) {
    RfEdge e{w, r, Lit::make(next++), "s_" + g.events[r].name + "_" + g.events[w].name};
    g.rf.push_back(e);
    return e.sel;
  }
};

// Transitive closure of the given pairs over n nodes.
OrderSet transitive(std::size_t n, OrderSet pairs) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
  for (auto [a, b] : pairs) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  OrderSet out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j]) out.emplace(i, j);
  return out;
}

OrderSet base_with(const Eog& g, std::initializer_list<std::pair<NodeId, NodeId>> extra) {
  OrderSet s(g.po.begin(), g.po.end());
  for (const auto& r : g.rf) s.emplace(r.from, r.to);
  for (auto p : extra) s.insert(p);
  return transitive(g.events.size(), s);
}

OrderSet derived(const ClosureOutcome& out) {
  auto v = out.orders();
  return OrderSet(v.begin(), v.end());
}

// Writer before a read that observes another writer.
TEST(Closure, WriteBeforeObservedRead) {
  Builder b;
  NodeId x0 = b.ev("x0", Access::Write, 0), x1 = b.ev("x1", Access::Read, 0), x2 = b.ev("x2", Access::Write, 1);
  b.po(x0, x1);
  b.rf(x2, x1);
  ClosureOutcome out = closure(b.g);
  EXPECT_EQ(out.verdict, ClosureVerdict::NotSure);
  EXPECT_TRUE(out.ordered(x0, x2));
  EXPECT_EQ(derived(out), base_with(b.g, {{x0, x2}}));
  auto bf = oracle::eog_feasible_bruteforce(b.g);
  ASSERT_TRUE(bf.feasible);
  EXPECT_EQ(bf.order, (std::vector<NodeId>{x0, x2, x1}));
}

// The read sits two program-order steps after the writer.
TEST(Closure, WriteBeforeReadThroughChain) {
  Builder b;
  NodeId x0 = b.ev("x0", Access::Write, 0), x1 = b.ev("x1", Access::Read, 0), x2 = b.ev("x2", Access::Read, 0),
         x3 = b.ev("x3", Access::Write, 1);
  b.po(x0, x1);
  b.po(x1, x2);
  b.rf(x3, x1);
  b.rf(x3, x2);
  ClosureOutcome out = closure(b.g);
  EXPECT_EQ(out.verdict, ClosureVerdict::NotSure);
  EXPECT_EQ(derived(out), base_with(b.g, {{x0, x3}}));
  EXPECT_TRUE(oracle::eog_feasible_bruteforce(b.g).feasible);
}

// The writer reaches the read only through a read-from edge of another variable.
TEST(Closure, WriteBeforeReadAcrossThreads) {
  Builder b;
  NodeId x0 = b.ev("x0", Access::Write, 0), y0 = b.ev("y0", Access::Write, 0), y1 = b.ev("y1", Access::Read, 1),
         x1 = b.ev("x1", Access::Read, 1), x2 = b.ev("x2", Access::Write, 2);
  b.po(x0, y0);
  b.po(y1, x1);
  b.rf(y0, y1);
  b.rf(x2, x1);
  ClosureOutcome out = closure(b.g);
  EXPECT_EQ(out.verdict, ClosureVerdict::NotSure);
  EXPECT_EQ(derived(out), base_with(b.g, {{x0, x2}}));
  EXPECT_TRUE(oracle::eog_feasible_bruteforce(b.g).feasible);
}

Eog running_example_eog() {
  return eog_from_json(testing::read_file(std::string(MTL_DATA_DIR) + "/running_example_eog.json"));
}

NodeId named(const Eog& g, const std::string& n) {
  for (NodeId i = 0; i < g.events.size(); ++i)
    if (g.events[i].name == n) return i;
  return kNone;
}

std::set<std::set<std::string>> clause_names(const Eog& g, const std::vector<sat::Clause>& cs) {
  std::set<std::set<std::string>> out;
  for (const auto& c : cs) {
    std::set<std::string> s;
    for (Lit l : c) s.insert((l.negative() ? "!" : "") + g.lit_name(l.negative() ? ~l : l));
    out.insert(s);
  }
  return out;
}

TEST(Closure, RunningExampleCounterexample) {
  Eog g = running_example_eog();
  ClosureOutcome out = closure(g);
  EXPECT_TRUE(out.ordered(named(g, "y3"), named(g, "y4")));
  EXPECT_TRUE(out.ordered(named(g, "x5"), named(g, "x2")));
  EXPECT_EQ(out.verdict, ClosureVerdict::Infeasible);
  auto reasons = out.reasons_of(named(g, "y3"), named(g, "y4"));
  ASSERT_EQ(reasons.size(), 1u);
  EXPECT_EQ(g.lit_name(reasons[0].at(0)), "s_y_3_1");
  auto kappa = clause_names(g, refine(out));
  EXPECT_TRUE(kappa.count({"!s_y_3_1", "!s_x_5_1"}));
  EXPECT_TRUE(kappa.count({"!s_x_5_1", "!s_x_4_2"}));
  EXPECT_FALSE(oracle::eog_feasible_bruteforce(g, 16).feasible);
  EXPECT_FALSE(exact::validate_exact(g).feasible);
}

TEST(Closure, ProgramOrderCycle) {
  Builder b;
  NodeId a = b.ev("a0", Access::Write, 0), c = b.ev("a1", Access::Write, 1);
  b.po(a, c);
  b.po(c, a);
  ClosureOutcome out = closure(b.g);
  EXPECT_EQ(out.verdict, ClosureVerdict::Infeasible);
  // unconditional events: the only kernel reason is empty, which no
  // refinement clause can express
  ASSERT_FALSE(out.conflicts.empty());
  EXPECT_EQ(out.reasons_of(a, a), (std::vector<Reason>{Reason{}}));
  EXPECT_THROW(refine(out), InternalError);
  EXPECT_FALSE(oracle::eog_feasible_bruteforce(b.g).feasible);
}

TEST(Closure, EmptyGraph) {
  Eog g;
  EXPECT_EQ(closure(g).verdict, ClosureVerdict::NotSure);
  auto bf = oracle::eog_feasible_bruteforce(g);
  EXPECT_TRUE(bf.feasible);
  EXPECT_TRUE(bf.order.empty());
  EXPECT_TRUE(exact::validate_exact(g).feasible);
}

TEST(Closure, GuardsEnterReasons) {
  Builder b;
  NodeId x0 = b.ev("x0", Access::Write, 0), x1 = b.ev("x1", Access::Read, 0), x2 = b.ev("x2", Access::Write, 1);
  b.g.events[x0].guard = Lit::make(40);
  b.g.events[x0].guard_name = "g0";
  b.po(x0, x1);
  Lit s = b.rf(x2, x1);
  b.po(x2, x0);  // x2 < x0 < x1 with x2 -> x1: x0 intervenes
  ClosureOutcome out = closure(b.g);
  ASSERT_EQ(out.verdict, ClosureVerdict::Infeasible);
  auto k = refine(out);
  ASSERT_EQ(k.size(), 1u);
  sat::Clause want{~s, ~Lit::make(40)};
  std::sort(want.begin(), want.end());
  auto got = k[0];
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, want);
}

TEST(Antichain, InsertKeepsMinimalSets) {
  auto L = [](uint32_t v) { return Lit::make(v); };
  std::vector<Reason> chain;
  EXPECT_TRUE(antichain_insert(chain, {L(1), L(2)}));
  EXPECT_TRUE(antichain_insert(chain, {L(2), L(3)}));
  EXPECT_FALSE(antichain_insert(chain, {L(1), L(2), L(3)}));
  EXPECT_FALSE(antichain_insert(chain, {L(1), L(2)}));
  EXPECT_TRUE(antichain_insert(chain, {L(2)}));
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0], (Reason{L(2)}));
  EXPECT_TRUE(antichain_insert(chain, {}));
  EXPECT_EQ(chain, (std::vector<Reason>{Reason{}}));
}

std::map<std::pair<NodeId, NodeId>, std::set<Reason>> all_reasons(const ClosureOutcome& out) {
  std::map<std::pair<NodeId, NodeId>, std::set<Reason>> m;
  for (auto [a, b] : out.orders()) {
    auto rs = out.reasons_of(a, b);
    m[{a, b}] = std::set<Reason>(rs.begin(), rs.end());
  }
  return m;
}

TEST(Closure, WorklistPolicyDoesNotChangeFixpoint) {
  std::mt19937 rng(2024);
  testing::EogShape shape;
  shape.guard_prob = 0.5;
  for (int i = 0; i < 300; ++i) {
    Eog g = testing::random_eog(rng, shape);
    ClosureOptions fifo, lifo;
    lifo.policy = Worklist::Lifo;
    ClosureOutcome a = closure(g, fifo), b = closure(g, lifo);
    ASSERT_EQ(a.verdict, b.verdict) << to_json(g);
    ASSERT_EQ(a.orders(), b.orders()) << to_json(g);
    if (a.reasons_truncated || b.reasons_truncated) continue;
    EXPECT_EQ(all_reasons(a), all_reasons(b)) << to_json(g);
  }
}

TEST(Closure, RepeatedRunsAreIdentical) {
  std::mt19937 rng(99);
  for (int i = 0; i < 50; ++i) {
    Eog g = testing::random_eog(rng);
    ClosureOutcome a = closure(g), b = closure(g);
    EXPECT_EQ(a.orders(), b.orders());
    EXPECT_EQ(a.conflicts, b.conflicts);
    if (a.verdict == ClosureVerdict::Infeasible && !a.reasons_of(a.conflicts[0], a.conflicts[0])[0].empty())
      EXPECT_EQ(refine(a), refine(b));
  }
}

TEST(Fuzz, ClosureSoundExactComplete) {
  std::mt19937 rng(1);
  int infeasible = 0, feasible = 0;
  for (int i = 0; i < 400; ++i) {
    Eog g = testing::random_eog(rng);
    auto bf = oracle::eog_feasible_bruteforce(g);
    ClosureOutcome out = closure(g);
    if (out.verdict == ClosureVerdict::Infeasible) {
      ASSERT_FALSE(bf.feasible) << to_json(g);
      for (const auto& c : refine(out))
        for (Lit l : c) EXPECT_TRUE(l.negative());
    }
    exact::ExactResult ex = exact::validate_exact(g, i);
    ASSERT_EQ(ex.feasible, bf.feasible) << to_json(g);
    if (bf.feasible) {
      ++feasible;
      EXPECT_TRUE(satisfies_requirements(g, bf.order));
      EXPECT_TRUE(satisfies_requirements(g, ex.order));
    } else {
      ++infeasible;
      sat::Clause k = exact::refine_from_core(ex.core);
      EXPECT_FALSE(k.empty());
    }
  }
  EXPECT_GT(infeasible, 20);
  EXPECT_GT(feasible, 20);
}

TEST(Eog, JsonRoundTrip) {
  Eog g = running_example_eog();
  Eog h = eog_from_json(to_json(g));
  ASSERT_EQ(h.events.size(), g.events.size());
  EXPECT_EQ(h.po, g.po);
  ASSERT_EQ(h.rf.size(), g.rf.size());
  for (std::size_t i = 0; i < g.rf.size(); ++i) {
    EXPECT_EQ(h.rf[i].sel, g.rf[i].sel);
    EXPECT_EQ(h.rf[i].name, g.rf[i].name);
  }
  EXPECT_EQ(derived(closure(h)), derived(closure(g)));
}

TEST(Eog, MalformedJsonRejected) {
  EXPECT_THROW(eog_from_json("{"), std::invalid_argument);
  EXPECT_THROW(eog_from_json(R"({"events":[{"name":"a","var":"a","type":"Q"}],"po":[],"rf":[]})"),
               std::invalid_argument);
  EXPECT_THROW(eog_from_json(R"({"events":[{"name":"a","var":"a","type":"R"},{"name":"b","var":"b","type":"W"}],
                               "po":[],"rf":[{"from":1,"to":0,"sel":1}]})"),
               std::invalid_argument);
}

TEST(BruteForce, SizeCap) {
  std::mt19937 rng(5);
  testing::EogShape shape;
  shape.max_events = 10;
  Eog g;
  while (g.events.size() < 9) g = testing::random_eog(rng, shape);
  EXPECT_THROW(oracle::eog_feasible_bruteforce(g, 5), std::invalid_argument);
}

}  // namespace
}  // namespace mtl::eog
