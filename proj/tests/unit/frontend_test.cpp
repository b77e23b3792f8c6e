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

#include "frontend/program.hpp"
#include "helpers.hpp"

namespace mtl {
namespace {

using testing::event_named;
using testing::load;

const char* kRunning = R"(
shared int x = 1;
shared int y = 1;
shared int m = 0;
shared int n = 0;
thread thr1 { x = y + 1; m = y; x = 0; }
thread thr2 { y = x + 1; n = x; y = 0; }
main {
  local int t1;
  local int t2;
  t1 = spawn thr1;
  t2 = spawn thr2;
  join t1;
  join t2;
  assert(!(m == 1 && n == 1));
}
)";

std::string error_of(const std::string& src, int depth = 1) {
  try {
    load(src, depth);
  } catch (const FrontendError& e) {
    return e.what();
  }
  return "";
}

TEST(Parse, RunningExampleStructure) {
  Ast a = parse(kRunning);
  ASSERT_EQ(a.shared.size(), 4u);
  std::vector<std::string> names;
  std::vector<int64_t> inits;
  for (const auto& s : a.shared) {
    names.push_back(s.name);
    inits.push_back(s.init);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"x", "y", "m", "n"}));
  EXPECT_EQ(inits, (std::vector<int64_t>{1, 1, 0, 0}));
  ASSERT_EQ(a.threads.size(), 2u);
  EXPECT_EQ(a.threads[0].name, "thr1");
  EXPECT_EQ(a.threads[1].name, "thr2");
  EXPECT_EQ(a.main_body.size(), 7u);
  EXPECT_EQ(a.main_body[2].kind, StmtKind::Spawn);
  EXPECT_EQ(a.main_body[2].thread_name, "thr1");
}

TEST(Parse, PrintRoundTrip) {
  Ast a = parse(kRunning);
  std::string text = print(a);
  Ast b = parse(text);
  EXPECT_EQ(a.main_body, b.main_body);
  EXPECT_EQ(print(b), text);
}

TEST(Parse, Precedence) {
  Ast a = parse("shared int x; main { x = 1 + 2 * 3 == 7 && !(x < 0) || 0; }");
  const Expr& e = a.main_body[0].expr;
  ASSERT_EQ(e.kind, ExprKind::Binary);
  EXPECT_EQ(e.op, Op::Or);
  ASSERT_EQ(e.args[0].op, Op::And);
  const Expr& eq = e.args[0].args[0];
  EXPECT_EQ(eq.op, Op::Eq);
  EXPECT_EQ(eq.args[0].op, Op::Add);
  EXPECT_EQ(eq.args[0].args[1].op, Op::Mul);
}

TEST(Parse, UninitializedSharedIsZero) {
  Ast a = parse("shared int x; main { }");
  EXPECT_EQ(a.shared[0].init, 0);
}

struct BadCase {
  const char* src;
  const char* fragment;
};

class ParseErrors : public ::testing::TestWithParam<BadCase> {};

TEST_P(ParseErrors, Rejected) {
  std::string msg = error_of(GetParam().src);
  EXPECT_NE(msg.find(GetParam().fragment), std::string::npos) << "message: " << msg;
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ParseErrors,
    ::testing::Values(BadCase{"main { z = 1; }", "undeclared identifier 'z'"},
                      BadCase{"shared int x; main { x = 1 }", "expected"},
                      BadCase{"shared int x; shared int x; main { }", "duplicate declaration"},
                      BadCase{"main { local int h; h = spawn nope; }", "undefined thread"},
                      BadCase{"main { local int h; join h; }", "never-spawned"},
                      BadCase{"thread t { } main { local int h; h = 3; h = spawn t; join h; }", "non-spawn"},
                      BadCase{"thread t { local int h; h = spawn t; } main { local int h; h = spawn t; }",
                              "recursion"},
                      BadCase{"main { local int a = 1 $ 2; }", "unexpected character"},
                      BadCase{"main { /* open", "unterminated comment"},
                      BadCase{"shared int x; main { if (x) { x = 1; }", "expected '}'"}));

TEST(Parse, ErrorCarriesLocation) {
  try {
    parse("shared int x;\nmain {\n  x = q;\n}\n");
    FAIL() << "no error";
  } catch (const FrontendError& e) {
    EXPECT_EQ(e.loc().line, 3);
    EXPECT_EQ(e.loc().column, 7);
  }
}

// Statement trees of main after unwinding, rendered as text.
std::string unwound_main(const std::string& src, int depth, bool asserts = false) {
  UnwindOptions uo;
  uo.depth = depth;
  uo.unwinding_assertions = asserts;
  Ast a = inline_and_unwind(parse(src), uo);
  Ast shell;
  shell.shared = a.shared;
  shell.main_body = a.main_body;
  return print(shell);
}

TEST(Unwind, DepthTwoMatchesHandExpansion) {
  const char* loop = "shared int x; main { local int i = 0; while (i < 5) { i = i + 1; x = i; } }";
  const char* hand =
      "shared int x; main { local int i = 0;"
      " if (i < 5) { i = i + 1; x = i;"
      "   if (i < 5) { i = i + 1; x = i; assume(!(i < 5)); } } }";
  EXPECT_EQ(unwound_main(loop, 2), unwound_main(hand, 1));
}

TEST(Unwind, NestedLoopsMatchHandExpansion) {
  const char* loop =
      "shared int x; main { local int i = 0; local int j = 0;"
      " while (i < 2) { j = 0; while (j < 2) { j = j + 1; } i = i + 1; } }";
  const char* hand =
      "shared int x; main { local int i = 0; local int j = 0;"
      " if (i < 2) { j = 0;"
      "   if (j < 2) { j = j + 1; if (j < 2) { j = j + 1; assume(!(j < 2)); } }"
      "   i = i + 1;"
      "   if (i < 2) { j = 0;"
      "     if (j < 2) { j = j + 1; if (j < 2) { j = j + 1; assume(!(j < 2)); } }"
      "     i = i + 1; assume(!(i < 2)); } } }";
  EXPECT_EQ(unwound_main(loop, 2), unwound_main(hand, 1));
}

TEST(Unwind, UnwindingAssertionVariant) {
  const char* loop = "shared int x; main { while (x < 3) { x = x + 1; } }";
  std::string text = unwound_main(loop, 1, true);
  EXPECT_NE(text.find("assert(!(x < 3))"), std::string::npos) << text;
  EXPECT_EQ(text.find("assume"), std::string::npos) << text;
}

TEST(Unwind, ZeroDepthRejected) {
  EXPECT_THROW(inline_and_unwind(parse("main { }"), UnwindOptions{0, false, 1000}), FrontendError);
}

TEST(Unwind, StatementBudget) {
  const char* src = "shared int x; main { while (x < 9) { while (x < 9) { while (x < 9) { x = x + 1; } } } }";
  UnwindOptions uo;
  uo.depth = 20;
  uo.statement_budget = 500;
  EXPECT_THROW(inline_and_unwind(parse(src), uo), FrontendError);
}

TEST(Normalize, RunningExampleAccesses) {
  NormalizedProgram p = load(kRunning);
  // main + two instances
  ASSERT_EQ(p.threads.size(), 3u);
  std::vector<std::string> xw, xr;
  for (EventId e = 0; e < p.events.size(); ++e)
    if (p.shared[p.events[e].var].name == "x")
      (p.events[e].type == Access::Write ? xw : xr).push_back(p.event_name(e));
  EXPECT_EQ(xw, (std::vector<std::string>{"x1", "x2", "x3"}));
  EXPECT_EQ(xr, (std::vector<std::string>{"x4", "x5"}));
  // 4 init writes, 5 per worker, 2 final reads
  EXPECT_EQ(p.events.size(), 16u);
  for (const auto& t : p.threads)
    for (const auto& s : t.body) EXPECT_LE(shared_access_count(p, s), 1);
}

TEST(Normalize, OneAccessPerGlobalStatement) {
  NormalizedProgram p = load("shared int a; shared int b; main { a = a + b * a; assert(a == b); }");
  // reads a, b, a; write a; reads a, b; plus two init writes
  EXPECT_EQ(p.events.size(), 8u);
  for (const auto& s : p.threads[0].body) EXPECT_EQ(shared_access_count(p, s), s.is_global() ? 1 : 0);
}

TEST(ProgramOrder, SpawnAndJoin) {
  NormalizedProgram p = load(kRunning);
  ProgramOrder po = program_order(p);
  auto ev = [&](const char* n) { return event_named(p, n); };
  // everything main did before the spawns precedes the workers
  for (const char* init : {"x1", "y1", "m1", "n1"})
    for (const char* w : {"y2", "x2", "y3", "m2", "x3", "x4", "y4", "x5", "n2", "y5"})
      EXPECT_TRUE(po.ordered(ev(init), ev(w))) << init << " " << w;
  EXPECT_TRUE(po.ordered(ev("y2"), ev("x3")));
  EXPECT_FALSE(po.ordered(ev("y2"), ev("x4")));
  EXPECT_FALSE(po.ordered(ev("x4"), ev("y2")));
  // joins order worker events before the final reads
  EXPECT_TRUE(po.ordered(ev("x3"), ev("m3")));
  EXPECT_TRUE(po.ordered(ev("y5"), ev("n3")));
  for (EventId e = 0; e < p.events.size(); ++e) EXPECT_FALSE(po.ordered(e, e));
}

TEST(ProgramOrder, JoinInsideBranchIsPathSensitive) {
  NormalizedProgram p = load(R"(
shared int x; shared int y; shared int z;
thread w { x = 1; }
main {
  local int h; local int c = nondet();
  h = spawn w;
  if (c) { join h; y = 1; } else { y = 2; }
  z = 1;
})");
  ProgramOrder po = program_order(p);
  EventId wx = event_named(p, "x2"), y_then = event_named(p, "y2"), y_else = event_named(p, "y3"),
          z = event_named(p, "z2");
  ASSERT_NE(wx, kNone);
  ASSERT_NE(z, kNone);
  EXPECT_TRUE(po.ordered(wx, y_then));
  EXPECT_FALSE(po.ordered(wx, y_else));
  EXPECT_FALSE(po.ordered(wx, z));
  EXPECT_TRUE(po.ordered(y_then, z));
  EXPECT_TRUE(po.ordered(y_else, z));
  EXPECT_FALSE(po.ordered(y_then, y_else));
}

TEST(ProgramOrder, CoveringPairsGenerateRelation) {
  NormalizedProgram p = load(kRunning);
  ProgramOrder po = program_order(p);
  const std::size_t n = po.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (auto [a, b] : po.covering_pairs()) reach[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (EventId a = 0; a < n; ++a)
    for (EventId b = 0; b < n; ++b) EXPECT_EQ(reach[a][b], po.ordered(a, b)) << a << " " << b;
}

TEST(Normalize, ThreadInstancesPerSpawn) {
  NormalizedProgram p = load(R"(
shared int c;
thread inc { c = c + 1; }
main { local int a; local int b; a = spawn inc; b = spawn inc; join a; join b; }
)");
  ASSERT_EQ(p.threads.size(), 3u);
  EXPECT_NE(p.threads[1].name, p.threads[2].name);
  EXPECT_EQ(p.threads[1].parent, 0u);
}

TEST(Normalize, JoinedTwiceRejected) {
  std::string msg = error_of(R"(
thread t { }
main { local int h; local int c = nondet(); h = spawn t; if (c) { join h; } join h; }
)");
  EXPECT_FALSE(msg.empty());
}

}  // namespace
}  // namespace mtl
