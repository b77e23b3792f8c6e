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
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mtl::sat {

using Var = uint32_t;

// Literal packed as 2*var + sign (sign set = negative).
struct Lit {
  uint32_t x = UINT32_MAX;

  static constexpr Lit make(Var v, bool negative = false) { return Lit{2 * v + (negative ? 1u : 0u)}; }
  constexpr Var var() const { return x >> 1; }
  constexpr bool negative() const { return x & 1; }
  constexpr Lit operator~() const { return Lit{x ^ 1u}; }
  constexpr bool defined() const { return x != UINT32_MAX; }

  // DIMACS form: variables are 1-based.
  int to_dimacs() const { return negative() ? -static_cast<int>(var() + 1) : static_cast<int>(var() + 1); }
  static Lit from_dimacs(int d) { return make(static_cast<Var>((d < 0 ? -d : d) - 1), d < 0); }

  friend constexpr bool operator==(Lit a, Lit b) { return a.x == b.x; }
  friend constexpr bool operator!=(Lit a, Lit b) { return a.x != b.x; }
  friend constexpr bool operator<(Lit a, Lit b) { return a.x < b.x; }
};

inline constexpr Lit kUndefLit{};

using Clause = std::vector<Lit>;

enum class LBool : uint8_t { False = 0, True = 1, Undef = 2 };

enum class Status { Sat, Unsat };

struct SolverOptions {
  uint64_t seed = 0;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  int restart_base = 100;
};

struct SolverStats {
  uint64_t decisions = 0;
  uint64_t conflicts = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t solves = 0;
};

// Incremental CDCL solver: two watched literals, VSIDS, phase saving, Luby
// restarts, assumptions decided first and unsat cores from final-conflict
// analysis. Deterministic for a fixed seed and clause insertion order.
class Solver {
 public:
  explicit Solver(SolverOptions options = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  Var new_var();
  std::size_t num_vars() const { return assigns_.size(); }
  std::size_t num_clauses() const { return num_original_; }

  // Returns false once the database is known unsatisfiable at level 0.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

  Status solve(std::span<const Lit> assumptions = {});

  // Valid after Sat.
  LBool model_value(Var v) const { return model_[v]; }
  bool model_true(Lit l) const {
    LBool b = model_[l.var()];
    return b != LBool::Undef && ((b == LBool::True) != l.negative());
  }
  const std::vector<LBool>& model() const { return model_; }

  // Valid after Unsat: subset of the assumptions that is jointly
  // inconsistent with the database (empty if the database alone is unsat).
  const std::vector<Lit>& core() const { return core_; }

  bool okay() const { return ok_; }
  const SolverStats& stats() const { return stats_; }

 private:
  struct ClauseData {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool removed = false;
  };
  using CRef = uint32_t;
  static constexpr CRef kNoReason = UINT32_MAX;
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  LBool value(Lit l) const {
    LBool b = assigns_[l.var()];
    if (b == LBool::Undef) return b;
    return (b == LBool::True) != l.negative() ? LBool::True : LBool::False;
  }
  int level(Var v) const { return level_[v]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void assign(Lit l, CRef reason);
  CRef attach(std::vector<Lit> lits, bool learnt);
  CRef propagate();
  void analyze(CRef conflict, std::vector<Lit>& learnt, int& backtrack_level);
  bool redundant(Lit p, uint32_t abstract_levels);
  void analyze_final(Lit p);
  void cancel_until(int level);
  Lit pick_branch();
  void bump_var(Var v);
  void bump_clause(ClauseData& c);
  void reduce_db();

  // Binary max-heap on activity.
  void heap_insert(Var v);
  Var heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  bool heap_less(Var a, Var b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  SolverOptions opts_;
  bool ok_ = true;
  std::vector<ClauseData> clauses_;
  std::vector<CRef> learnts_;
  std::size_t num_original_ = 0;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<LBool> assigns_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<bool> polarity_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<Var> heap_;
  std::vector<int> heap_index_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::vector<uint8_t> seen_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_clear_;
  std::vector<LBool> model_;
  std::vector<Lit> core_;
  double max_learnts_ = 0;
  uint64_t rng_state_;
  SolverStats stats_;
};

// DIMACS CNF text <-> clause list.
struct Cnf {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;
};

Cnf parse_dimacs(const std::string& text);
std::string write_dimacs(const Cnf& cnf, const std::vector<std::string>& comments = {});

}  // namespace mtl::sat
