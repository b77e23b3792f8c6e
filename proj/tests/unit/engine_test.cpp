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

#include "common/random_program.hpp"
#include "driver/driver.hpp"
#include "helpers.hpp"

namespace mtl::driver {
namespace {

Config with(Engine e) {
  Config c;
  c.engine = e;
  c.check_invariants = true;
  return c;
}

class CorpusEngines : public ::testing::TestWithParam<testing::CorpusEntry> {};

TEST_P(CorpusEngines, AgreeWithExpectation) {
  const auto& entry = GetParam();
  auto program = load_program(entry.source, Config{});
  for (Engine e : {Engine::Cegar, Engine::Monolithic, Engine::Explicit}) {
    Result r = verify(program, with(e));
    EXPECT_EQ(verdict_name(r.verdict), entry.expected) << engine_name(e);
    EXPECT_TRUE(r.invariant_failures.empty()) << engine_name(e) << ": " << r.invariant_failures.front();
    if (r.verdict == Verdict::Unsafe) {
      oracle::ReplayResult rr = oracle::replay(*program, r.witness);
      EXPECT_TRUE(rr.ok && rr.violated) << engine_name(e) << ": " << rr.error;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusEngines, ::testing::ValuesIn(testing::corpus()),
                         [](const auto& info) { return info.param.name; });

TEST(Engines, RandomProgramsAgree) {
  std::mt19937 rng(17);
  int unsafe = 0;
  for (int i = 0; i < 150; ++i) {
    std::string src = testing::random_program(rng);
    auto program = load_program(src, Config{});
    Result ex = verify(program, with(Engine::Explicit));
    ASSERT_NE(ex.verdict, Verdict::Unknown) << src;
    Result cg = verify(program, with(Engine::Cegar));
    Result mono = verify(program, with(Engine::Monolithic));
    ASSERT_EQ(cg.verdict, ex.verdict) << src;
    ASSERT_EQ(mono.verdict, ex.verdict) << src;
    EXPECT_TRUE(cg.invariant_failures.empty()) << src;
    if (cg.verdict == Verdict::Unsafe) {
      ++unsafe;
      EXPECT_TRUE(oracle::replay(*program, cg.witness).violated) << src;
    }
  }
  EXPECT_GT(unsafe, 15);
  EXPECT_LT(unsafe, 135);
}

TEST(Engines, SeedsAgree) {
  std::string src = testing::read_file(std::string(MTL_CORPUS_DIR) + "/peterson.mtl");
  for (uint64_t seed : {1u, 2u, 3u}) {
    Config c = with(Engine::Cegar);
    c.seed = seed;
    EXPECT_EQ(verify_source(src, c).verdict, Verdict::Safe) << seed;
  }
}

TEST(Cegar, RunningExampleUsesGraphValidationOnly) {
  std::string src = testing::read_file(std::string(MTL_CORPUS_DIR) + "/running_example.mtl");
  Result r = verify_source(src, with(Engine::Cegar));
  EXPECT_EQ(r.verdict, Verdict::Safe);
  EXPECT_EQ(r.stats.fallback_invocations, 0u);
  EXPECT_GE(r.stats.iterations, 1u);
  EXPECT_LE(r.stats.iterations, 10u);
  EXPECT_EQ(r.refinements.size(), r.stats.iterations);
  for (const auto& ref : r.refinements) EXPECT_TRUE(ref.model_falsifies);
}

TEST(Cegar, IterationBudgetGivesUnknown) {
  std::string src = testing::read_file(std::string(MTL_CORPUS_DIR) + "/running_example.mtl");
  Config c;
  c.max_iterations = 0;
  Result r = verify_source(src, c);
  EXPECT_EQ(r.verdict, Verdict::Unknown);
  EXPECT_FALSE(r.unknown_reason.empty());
}

TEST(Driver, UnwindDepthMatters) {
  const char* src = R"(
shared int x;
main { local int i = 0; while (i < 2) { i = i + 1; } x = i; assert(x != 2); }
)";
  Config c1;
  EXPECT_EQ(verify_source(src, c1).verdict, Verdict::Safe);
  Config c3;
  c3.unwind = 3;
  EXPECT_EQ(verify_source(src, c3).verdict, Verdict::Unsafe);
  Config ua;
  ua.unwinding_assertions = true;
  EXPECT_EQ(verify_source(src, ua).verdict, Verdict::Unsafe);
}

TEST(Driver, WidthAffectsVerdict) {
  const char* src = "shared int x = 7; main { x = x + 1; assert(x > 0); }";
  Config c;
  c.width = 4;
  for (Engine e : {Engine::Cegar, Engine::Monolithic, Engine::Explicit}) {
    c.engine = e;
    EXPECT_EQ(verify_source(src, c).verdict, Verdict::Unsafe) << engine_name(e);
  }
}

TEST(Driver, StatsJsonSchema) {
  Result r = verify_source("shared int x; main { assert(x == 0); }", Config{});
  std::string j = r.stats.to_json();
  for (const char* key : {"\"schema_version\"", "\"engine\"", "\"verdict\"", "\"iterations\"", "\"clauses_initial\"",
                          "\"clauses_refinement\"", "\"time_ms\"", "\"encode\"", "\"solve\"", "\"closure\"",
                          "\"exact\"", "\"fallback_invocations\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}

}  // namespace
}  // namespace mtl::driver
