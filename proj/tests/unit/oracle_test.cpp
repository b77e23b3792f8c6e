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

#include "helpers.hpp"
#include "oracle/oracle.hpp"

namespace mtl::oracle {
namespace {

using testing::load;

TEST(Explore, RunningExampleSafe) {
  auto p = load(testing::read_file(std::string(MTL_CORPUS_DIR) + "/running_example.mtl"));
  ExploreResult r = enumerate_schedules(p);
  EXPECT_EQ(r.verdict, OracleVerdict::Safe);
  EXPECT_GT(r.states, 10u);
}

TEST(Explore, StoreBufferShapedRace) {
  auto p = load(R"(
shared int x; shared int y; shared int a; shared int b;
thread t0 { x = 1; a = y; }
thread t1 { y = 1; b = x; }
main { local int h0; local int h1; h0 = spawn t0; h1 = spawn t1; join h0; join h1;
  assert(!(a == 1 && b == 1)); })");
  ExploreResult r = enumerate_schedules(p);
  ASSERT_EQ(r.verdict, OracleVerdict::Unsafe);
  ASSERT_TRUE(r.schedule.violated.has_value());
  EXPECT_LT(r.schedule.steps.size(), 40u);
  ReplayResult rr = replay(p, r.schedule);
  EXPECT_TRUE(rr.ok) << rr.error;
  EXPECT_TRUE(rr.violated);
}

TEST(Explore, SingleThreadViolationHasUniqueSchedule) {
  auto p = load("shared int x; main { x = 3; assert(x == 4); }");
  ExploreResult r = enumerate_schedules(p);
  ASSERT_EQ(r.verdict, OracleVerdict::Unsafe);
  // init write, write, read, assert
  ASSERT_EQ(r.schedule.steps.size(), 4u);
  EXPECT_EQ(r.schedule.steps[1].writes, (std::vector<std::pair<std::string, int64_t>>{{"x", 3}}));
  EXPECT_EQ(r.schedule.violated->thread, 0u);
}

TEST(Explore, NondetValueSetIsConfigurable) {
  auto p = load("shared int x; main { local int v = nondet(); assert(v != 5); }");
  EXPECT_EQ(enumerate_schedules(p).verdict, OracleVerdict::Safe);
  ExploreOptions o;
  o.nondet_values = {4, 5};
  ExploreResult r = enumerate_schedules(p, o);
  ASSERT_EQ(r.verdict, OracleVerdict::Unsafe);
  EXPECT_TRUE(replay(p, r.schedule).violated);
}

TEST(Explore, BudgetGivesUnknown) {
  auto p = load(testing::read_file(std::string(MTL_CORPUS_DIR) + "/iriw.mtl"));
  ExploreOptions o;
  o.state_budget = 50;
  EXPECT_EQ(enumerate_schedules(p, o).verdict, OracleVerdict::Unknown);
}

TEST(Explore, AssumeBlocksThread) {
  auto p = load("shared int x; main { assume(x == 1); assert(0); }");
  EXPECT_EQ(enumerate_schedules(p).verdict, OracleVerdict::Safe);
}

TEST(Replay, RejectsOutOfOrderSchedule) {
  auto p = load("shared int x; main { x = 3; assert(x == 4); }");
  ExploreResult r = enumerate_schedules(p);
  ASSERT_EQ(r.verdict, OracleVerdict::Unsafe);
  Schedule s = r.schedule;
  std::swap(s.steps[1], s.steps[2]);
  EXPECT_FALSE(replay(p, s).ok);
  Schedule empty;
  ReplayResult rr = replay(p, empty);
  EXPECT_TRUE(rr.ok);
  EXPECT_FALSE(rr.violated);
}

TEST(Replay, ScheduleJsonFields) {
  auto p = load("shared int x; main { x = 3; assert(x == 4); }");
  ExploreResult r = enumerate_schedules(p);
  std::string j = to_json(r.schedule);
  for (const char* key : {"\"step\"", "\"thread\"", "\"statement_text\"", "\"writes\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}

}  // namespace
}  // namespace mtl::oracle
