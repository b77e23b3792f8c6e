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

#include "driver/driver.hpp"

#include <chrono>
#include <json.hpp>

#include "exactorder/exactorder.hpp"

namespace mtl::driver {

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Cegar: return "cegar";
    case Engine::Monolithic: return "monolithic";
    case Engine::Explicit: return "explicit";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Safe: return "SAFE";
    case Verdict::Unsafe: return "UNSAFE";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

bool parse_engine(const std::string& s, Engine& out) {
  for (Engine e : {Engine::Cegar, Engine::Monolithic, Engine::Explicit})
    if (s == engine_name(e)) {
      out = e;
      return true;
    }
  return false;
}

std::string Stats::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["engine"] = engine_name(engine);
  j["verdict"] = verdict_name(verdict);
  j["iterations"] = iterations;
  j["clauses_initial"] = clauses_initial;
  j["clauses_refinement"] = clauses_refinement;
  j["clauses_scheduling"] = clauses_scheduling;
  j["time_ms"] = {{"encode", encode_ms}, {"solve", solve_ms}, {"closure", closure_ms}, {"exact", exact_ms}};
  j["fallback_invocations"] = fallback_invocations;
  j["events"] = events;
  j["threads"] = threads;
  return j.dump(2);
}

namespace {

using Clock = std::chrono::steady_clock;
using sat::Lit;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool holds(Lit l, const std::vector<sat::LBool>& model) {
  return (model[l.var()] == sat::LBool::True) != l.negative();
}

bool clause_false(const sat::Clause& c, const std::vector<sat::LBool>& model) {
  for (Lit l : c)
    if (holds(l, model)) return false;
  return true;
}

class WitnessBuilder {
 public:
  WitnessBuilder(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model)
      : ep_(ep), p_(*ep.program), model_(model), pc_(p_.threads.size(), 0), started_(p_.threads.size(), 0) {
    started_[0] = 1;
  }

  oracle::Schedule run(const std::vector<EventId>& events) {
    for (EventId e : events) {
      if (locals()) return std::move(out_);
      const EventInfo& ev = p_.events[e];
      skip(ev.thread);
      if (!started_[ev.thread] || pc_[ev.thread] != ev.stmt)
        throw InternalError("total order places " + p_.event_name(e) + " before its thread reaches it");
      emit(ev.thread);
    }
    if (locals()) return std::move(out_);
    throw InternalError("counterexample does not reach a failing assert");
  }

 private:
  bool enabled(ThreadId t, uint32_t i) const { return holds(ep_.stmts[t][i].guard, model_); }

  void skip(ThreadId t) {
    while (started_[t] && pc_[t] < p_.threads[t].body.size() && !enabled(t, pc_[t])) ++pc_[t];
  }

  bool finished(ThreadId t) {
    if (!started_[t]) return true;
    skip(t);
    return pc_[t] == p_.threads[t].body.size();
  }

  // Runs every runnable local statement; true once a failing assert ran.
  bool locals() {
    bool progress = true;
    while (progress) {
      progress = false;
      for (ThreadId t = 0; t < p_.threads.size(); ++t) {
        for (;;) {
          skip(t);
          if (!started_[t] || pc_[t] >= p_.threads[t].body.size()) break;
          const Statement& s = p_.threads[t].body[pc_[t]];
          if (s.is_global()) break;
          if (s.op == StmtOp::Join && !finished(s.child)) break;
          const bool failing = s.op == StmtOp::Assert && holds(ep_.stmts[t][pc_[t]].violation, model_);
          emit(t);
          progress = true;
          if (failing) {
            out_.violated = StmtRef{t, pc_[t] - 1};
            return true;
          }
        }
      }
    }
    return false;
  }

  void emit(ThreadId t) {
    const uint32_t i = pc_[t];
    const Statement& s = p_.threads[t].body[i];
    const enc::StmtEnc& se = ep_.stmts[t][i];
    oracle::ScheduleStep step;
    step.thread = t;
    step.stmt = i;
    step.thread_name = p_.threads[t].name;
    step.text = s.text;
    switch (s.op) {
      case StmtOp::Read:
      case StmtOp::Assign:
      case StmtOp::Nondet: {
        int64_t v = enc::decode(se.value, model_);
        step.writes.emplace_back(p_.locals[s.local].name, v);
        if (s.op == StmtOp::Nondet) step.nondet = v;
        break;
      }
      case StmtOp::Write: step.writes.emplace_back(p_.shared[s.shared].name, enc::decode(se.value, model_)); break;
      case StmtOp::Spawn: started_[s.child] = 1; break;
      default: break;
    }
    out_.steps.push_back(std::move(step));
    ++pc_[t];
  }

  const enc::EncodedProgram& ep_;
  const NormalizedProgram& p_;
  const std::vector<sat::LBool>& model_;
  std::vector<uint32_t> pc_;
  std::vector<uint8_t> started_;
  oracle::Schedule out_;
};

class Run {
 public:
  Run(std::shared_ptr<const NormalizedProgram> p, const Config& c) : p_(std::move(p)), cfg_(c) {
    res_.program = p_;
    res_.stats.engine = c.engine;
    res_.stats.events = p_->events.size();
    res_.stats.threads = p_->threads.size();
    t0_ = Clock::now();
  }

  Result run() {
    switch (cfg_.engine) {
      case Engine::Cegar: cegar(); break;
      case Engine::Monolithic: monolithic(); break;
      case Engine::Explicit: explicit_search(); break;
    }
    res_.stats.verdict = res_.verdict;
    return std::move(res_);
  }

 private:
  std::shared_ptr<enc::EncodedProgram> encode_program() {
    auto t = Clock::now();
    enc::EncodeOptions eo;
    eo.width = cfg_.width;
    eo.link_pruning = cfg_.link_pruning;
    auto ep = std::make_shared<enc::EncodedProgram>(enc::encode(*p_, eo));
    res_.stats.clauses_initial = ep->abstraction_clauses();
    if (cfg_.engine == Engine::Monolithic) {
      enc::encode_scheduling(*ep);
      res_.stats.clauses_scheduling = ep->formula.count(enc::Component::Xi);
    }
    res_.stats.encode_ms += ms_since(t);
    return ep;
  }

  sat::Status solve(sat::Solver& s) {
    auto t = Clock::now();
    sat::Status st = s.solve();
    res_.stats.solve_ms += ms_since(t);
    return st;
  }

  bool out_of_time() const {
    return cfg_.time_limit_ms > 0 && ms_since(t0_) > static_cast<double>(cfg_.time_limit_ms);
  }

  void check_model(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model, uint64_t iter) {
    if (!cfg_.check_invariants) return;
    for (const auto& c : ep.formula.clauses())
      if (clause_false(c, model)) {
        res_.invariant_failures.push_back("iteration " + std::to_string(iter) + ": model violates an input clause");
        return;
      }
  }

  void unsafe(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model, const eog::Eog& g,
              const std::vector<eog::NodeId>& order) {
    res_.witness = build_witness(ep, model, g, order);
    oracle::ReplayResult r = oracle::replay(*p_, res_.witness, cfg_.width);
    if (!r.ok || !r.violated)
      throw InternalError("witness does not replay to a failing assert: " + (r.error.empty() ? "no violation" : r.error));
    res_.verdict = Verdict::Unsafe;
  }

  void add_refinement(sat::Solver& s, const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model,
                      Refinement ref) {
    ref.model_falsifies = false;
    for (const auto& c : ref.clauses) {
      for (Lit l : c)
        if (l.var() >= ep.formula.num_vars()) throw InternalError("refinement over an unknown literal");
      if (clause_false(c, model)) ref.model_falsifies = true;
      s.add_clause(c);
      ++res_.stats.clauses_refinement;
    }
    if (cfg_.check_invariants && !ref.model_falsifies)
      res_.invariant_failures.push_back("iteration " + std::to_string(ref.iteration) +
                                        ": model satisfies the new refinement");
    res_.refinements.push_back(std::move(ref));
  }

  void cegar() {
    auto ep = encode_program();
    res_.encoded = ep;
    sat::Solver solver(sat::SolverOptions{.seed = cfg_.seed});
    ep->formula.load(solver);
    for (uint64_t iter = 0;; ++iter) {
      res_.stats.iterations = iter;
      if (iter >= cfg_.max_iterations) {
        res_.unknown_reason = "iteration budget exhausted";
        return;
      }
      if (out_of_time()) {
        res_.unknown_reason = "time budget exhausted";
        return;
      }
      if (solve(solver) == sat::Status::Unsat) {
        res_.verdict = Verdict::Safe;
        return;
      }
      const std::vector<sat::LBool> model = solver.model();
      check_model(*ep, model, iter);
      eog::Eog g = eog::build_eog(*ep, model);
      auto t = Clock::now();
      eog::ClosureOutcome out = eog::closure(g, cfg_.closure);
      res_.stats.closure_ms += ms_since(t);
      Refinement ref;
      ref.iteration = iter;
      if (out.verdict == eog::ClosureVerdict::Infeasible) {
        ref.clauses = eog::refine(out);
      } else {
        ++res_.stats.fallback_invocations;
        t = Clock::now();
        exact::ExactResult ex = exact::validate_exact(g, cfg_.seed);
        res_.stats.exact_ms += ms_since(t);
        if (ex.feasible) {
          unsafe(*ep, model, g, ex.order);
          return;
        }
        ref.fallback = true;
        ref.clauses.push_back(exact::refine_from_core(ex.core));
      }
      add_refinement(solver, *ep, model, std::move(ref));
    }
  }

  void monolithic() {
    auto ep = encode_program();
    res_.encoded = ep;
    sat::Solver solver(sat::SolverOptions{.seed = cfg_.seed});
    ep->formula.load(solver);
    if (solve(solver) == sat::Status::Unsat) {
      res_.verdict = Verdict::Safe;
      return;
    }
    const std::vector<sat::LBool> model = solver.model();
    check_model(*ep, model, 0);
    eog::Eog g = eog::build_eog(*ep, model);
    auto t = Clock::now();
    exact::ExactResult ex = exact::validate_exact(g, cfg_.seed);
    res_.stats.exact_ms += ms_since(t);
    if (!ex.feasible) throw InternalError("monolithic model has an infeasible event order");
    unsafe(*ep, model, g, ex.order);
  }

  void explicit_search() {
    oracle::ExploreOptions eo = cfg_.explore;
    eo.width = cfg_.width;
    auto t = Clock::now();
    oracle::ExploreResult r = oracle::enumerate_schedules(*p_, eo);
    res_.stats.solve_ms += ms_since(t);
    switch (r.verdict) {
      case oracle::OracleVerdict::Safe: res_.verdict = Verdict::Safe; break;
      case oracle::OracleVerdict::Unsafe:
        res_.verdict = Verdict::Unsafe;
        res_.witness = std::move(r.schedule);
        break;
      case oracle::OracleVerdict::Unknown:
        res_.unknown_reason = "state or step budget exhausted";
        break;
    }
  }

  std::shared_ptr<const NormalizedProgram> p_;
  const Config& cfg_;
  Result res_;
  Clock::time_point t0_;
};

}  // namespace

oracle::Schedule build_witness(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model,
                               const eog::Eog& g, const std::vector<eog::NodeId>& order) {
  if (!eog::satisfies_requirements(g, order)) throw InternalError("witness order violates the EOG requirements");
  std::vector<EventId> events;
  for (eog::NodeId v : order) events.push_back(g.events[v].origin);
  return WitnessBuilder(ep, model).run(events);
}

std::shared_ptr<const NormalizedProgram> load_program(const std::string& source, const Config& config) {
  Ast ast = parse(source);
  UnwindOptions uo;
  uo.depth = config.unwind;
  uo.unwinding_assertions = config.unwinding_assertions;
  Ast flat = inline_and_unwind(ast, uo);
  return std::make_shared<const NormalizedProgram>(normalize(flat));
}

Result verify(std::shared_ptr<const NormalizedProgram> program, const Config& config) {
  return Run(std::move(program), config).run();
}

Result verify_source(const std::string& source, const Config& config) {
  return verify(load_program(source, config), config);
}

}  // namespace mtl::driver
