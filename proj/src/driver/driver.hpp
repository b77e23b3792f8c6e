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

#include <memory>
#include <string>
#include <vector>

#include "encoder/encoder.hpp"
#include "eog/eog.hpp"
#include "oracle/oracle.hpp"

namespace mtl::driver {

enum class Engine { Cegar, Monolithic, Explicit };
enum class Verdict { Safe, Unsafe, Unknown };

const char* engine_name(Engine e);
const char* verdict_name(Verdict v);
bool parse_engine(const std::string& s, Engine& out);

struct Config {
  Engine engine = Engine::Cegar;
  int unwind = 1;
  bool unwinding_assertions = false;
  int width = 8;
  uint64_t max_iterations = 10000;
  uint64_t seed = 0;
  bool link_pruning = true;
  bool check_invariants = false;  // per-iteration progress and model checks
  uint64_t time_limit_ms = 0;     // 0: none
  eog::ClosureOptions closure;
  oracle::ExploreOptions explore;
};

struct Stats {
  Engine engine = Engine::Cegar;
  Verdict verdict = Verdict::Unknown;
  uint64_t iterations = 0;
  uint64_t clauses_initial = 0;
  uint64_t clauses_refinement = 0;
  uint64_t clauses_scheduling = 0;
  double encode_ms = 0, solve_ms = 0, closure_ms = 0, exact_ms = 0;
  uint64_t fallback_invocations = 0;
  uint64_t events = 0;
  uint64_t threads = 0;

  std::string to_json() const;
};

// Clauses added in one refinement iteration.
struct Refinement {
  uint64_t iteration = 0;
  bool fallback = false;
  std::vector<sat::Clause> clauses;
  bool model_falsifies = false;  // set when invariants are checked
};

struct Result {
  Verdict verdict = Verdict::Unknown;
  std::string unknown_reason;
  oracle::Schedule witness;
  Stats stats;
  std::vector<Refinement> refinements;
  std::vector<std::string> invariant_failures;
  std::shared_ptr<const NormalizedProgram> program;
  std::shared_ptr<const enc::EncodedProgram> encoded;  // cegar / monolithic
};

// Parses, unwinds and normalizes MTL source. Throws FrontendError.
std::shared_ptr<const NormalizedProgram> load_program(const std::string& source, const Config& config);

Result verify(std::shared_ptr<const NormalizedProgram> program, const Config& config);
Result verify_source(const std::string& source, const Config& config);

// Schedule of the counterexample: global statements in `order`, local
// statements placed as soon as their thread allows, values from the model.
oracle::Schedule build_witness(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model,
                               const eog::Eog& g, const std::vector<eog::NodeId>& order);

}  // namespace mtl::driver
