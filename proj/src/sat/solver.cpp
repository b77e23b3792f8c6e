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

#include "sat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mtl::sat {
namespace {

// Finite subsequences of the Luby sequence 1 1 2 1 1 2 4 ...
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

uint64_t splitmix(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Solver::Solver(SolverOptions options) : opts_(options), rng_state_(options.seed) {}

Solver::~Solver() = default;

Var Solver::new_var() {
  Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(LBool::Undef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  polarity_.push_back(true);
  activity_.push_back(opts_.seed == 0 ? 0.0 : static_cast<double>(splitmix(rng_state_) % 1000) * 1e-5);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_index_.push_back(-1);
  heap_insert(v);
  return v;
}

void Solver::assign(Lit l, CRef reason) {
  assigns_[l.var()] = l.negative() ? LBool::False : LBool::True;
  level_[l.var()] = decision_level();
  reason_[l.var()] = reason;
  trail_.push_back(l);
}

Solver::CRef Solver::attach(std::vector<Lit> lits, bool learnt) {
  CRef cref = static_cast<CRef>(clauses_.size());
  watches_[(~lits[0]).x].push_back({cref, lits[1]});
  watches_[(~lits[1]).x].push_back({cref, lits[0]});
  clauses_.push_back({std::move(lits), 0.0, learnt, false});
  if (learnt) learnts_.push_back(cref);
  return cref;
}

bool Solver::add_clause(std::span<const Lit> in) {
  if (!ok_) return false;
  ++num_original_;
  cancel_until(0);
  std::vector<Lit> lits(in.begin(), in.end());
  for (Lit l : lits)
    if (!l.defined() || l.var() >= num_vars()) throw std::invalid_argument("clause uses an unregistered variable");
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> kept;
  Lit prev = kUndefLit;
  for (Lit l : lits) {
    if (value(l) == LBool::True || l == ~prev) return true;
    if (value(l) != LBool::False && l != prev) kept.push_back(l);
    prev = l;
  }
  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    assign(kept[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  attach(std::move(kept), false);
  return true;
}

Solver::CRef Solver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = ~p;
    auto& ws = watches_[p.x];
    std::size_t i = 0, j = 0;
    ++stats_.propagations;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == LBool::True) {
        ws[j++] = ws[i++];
        continue;
      }
      ClauseData& c = clauses_[w.cref];
      if (c.removed) {
        ++i;
        continue;
      }
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      ++i;
      Lit first = c.lits[0];
      if (first != w.blocker && value(first) == LBool::True) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != LBool::False) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[(~c.lits[1]).x].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == LBool::False) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        assign(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

bool Solver::redundant(Lit p, uint32_t abstract_levels) {
  // Literal is implied by other literals of the learnt clause (recursive
  // minimization).
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  std::size_t top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const ClauseData& c = clauses_[reason_[q.var()]];
    for (std::size_t i = 1; i < c.lits.size(); ++i) {
      Lit r = c.lits[i];
      Var v = r.var();
      if (seen_[v] || level(v) == 0) continue;
      if (reason_[v] != kNoReason && (abstract_levels & (1u << (level(v) & 31))) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(r);
        analyze_clear_.push_back(r);
      } else {
        for (std::size_t k = top; k < analyze_clear_.size(); ++k) seen_[analyze_clear_[k].var()] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::analyze(CRef conflict, std::vector<Lit>& learnt, int& backtrack_level) {
  int path = 0;
  Lit p = kUndefLit;
  learnt.clear();
  learnt.push_back(kUndefLit);
  std::size_t index = trail_.size();
  do {
    ClauseData& c = clauses_[conflict];
    if (c.learnt) bump_clause(c);
    for (std::size_t j = p.defined() ? 1 : 0; j < c.lits.size(); ++j) {
      Lit q = c.lits[j];
      Var v = q.var();
      if (!seen_[v] && level(v) > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level(v) >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[trail_[--index].var()]) {
    }
    p = trail_[index];
    conflict = reason_[p.var()];
    seen_[p.var()] = 0;
    --path;
  } while (path > 0);
  learnt[0] = ~p;

  analyze_clear_.assign(learnt.begin(), learnt.end());
  uint32_t abstract_levels = 0;
  for (std::size_t i = 1; i < learnt.size(); ++i) abstract_levels |= 1u << (level(learnt[i].var()) & 31);
  std::size_t keep = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (reason_[learnt[i].var()] == kNoReason || !redundant(learnt[i], abstract_levels)) learnt[keep++] = learnt[i];
  }
  learnt.resize(keep);
  for (Lit l : analyze_clear_) seen_[l.var()] = 0;

  if (learnt.size() == 1) {
    backtrack_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level(learnt[i].var()) > level(learnt[max_i].var())) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level(learnt[1].var());
  }
}

// `p` is an assumption found false; collects the assumptions responsible.
void Solver::analyze_final(Lit p) {
  core_.clear();
  core_.push_back(p);
  if (decision_level() == 0) return;
  seen_[p.var()] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    Var x = trail_[i].var();
    if (!seen_[x]) continue;
    if (reason_[x] == kNoReason) {
      core_.push_back(trail_[i]);
    } else {
      const ClauseData& c = clauses_[reason_[x]];
      for (std::size_t j = 1; j < c.lits.size(); ++j)
        if (level(c.lits[j].var()) > 0) seen_[c.lits[j].var()] = 1;
    }
    seen_[x] = 0;
  }
  seen_[p.var()] = 0;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  for (std::size_t c = trail_.size(); c-- > trail_lim_[lvl];) {
    Var x = trail_[c].var();
    assigns_[x] = LBool::Undef;
    reason_[x] = kNoReason;
    polarity_[x] = trail_[c].negative();
    if (heap_index_[x] < 0) heap_insert(x);
  }
  qhead_ = trail_lim_[lvl];
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[v] == LBool::Undef) return Lit::make(v, polarity_[v]);
  }
  return kUndefLit;
}

void Solver::bump_var(Var v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(ClauseData& c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (CRef r : learnts_) clauses_[r].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Solver::reduce_db() {
  std::vector<CRef> live;
  for (CRef r : learnts_)
    if (!clauses_[r].removed) live.push_back(r);
  std::stable_sort(live.begin(), live.end(), [&](CRef a, CRef b) {
    const auto& ca = clauses_[a];
    const auto& cb = clauses_[b];
    if ((ca.lits.size() > 2) != (cb.lits.size() > 2)) return ca.lits.size() > 2;
    return ca.activity < cb.activity;
  });
  std::vector<CRef> kept;
  const std::size_t half = live.size() / 2;
  for (std::size_t i = 0; i < live.size(); ++i) {
    ClauseData& c = clauses_[live[i]];
    bool locked = reason_[c.lits[0].var()] == live[i] && value(c.lits[0]) == LBool::True;
    if (i < half && c.lits.size() > 2 && !locked) {
      c.removed = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    } else {
      kept.push_back(live[i]);
    }
  }
  learnts_ = std::move(kept);
}

void Solver::heap_insert(Var v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

Var Solver::heap_pop() {
  Var top = heap_[0];
  heap_[0] = heap_.back();
  heap_index_[heap_[0]] = 0;
  heap_.pop_back();
  heap_index_[top] = -1;
  if (!heap_.empty()) heap_down(0);
  return top;
}

void Solver::heap_up(std::size_t i) {
  Var v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  Var v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[v] = static_cast<int>(i);
}

Status Solver::solve(std::span<const Lit> assumptions) {
  ++stats_.solves;
  model_.clear();
  core_.clear();
  if (!ok_) return Status::Unsat;
  cancel_until(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return Status::Unsat;
  }
  max_learnts_ = std::max(2000.0, static_cast<double>(num_original_) / 3.0);
  std::vector<Lit> learnt;
  for (int restart = 0;; ++restart) {
    const int64_t budget = static_cast<int64_t>(luby(2, restart) * opts_.restart_base);
    int64_t conflicts = 0;
    for (;;) {
      CRef conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          return Status::Unsat;
        }
        int bt = 0;
        analyze(conflict, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          assign(learnt[0], kNoReason);
        } else {
          CRef cref = attach(learnt, true);
          bump_clause(clauses_[cref]);
          assign(learnt[0], cref);
        }
        var_inc_ /= opts_.var_decay;
        clause_inc_ /= opts_.clause_decay;
        continue;
      }
      if (conflicts >= budget) {
        ++stats_.restarts;
        cancel_until(0);
        break;
      }
      if (static_cast<double>(learnts_.size()) >= max_learnts_ + static_cast<double>(trail_.size())) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      Lit next = kUndefLit;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        Lit a = assumptions[decision_level()];
        if (a.var() >= num_vars()) throw std::invalid_argument("assumption uses an unregistered variable");
        LBool v = value(a);
        if (v == LBool::True) {
          trail_lim_.push_back(trail_.size());
        } else if (v == LBool::False) {
          analyze_final(a);
          // analyze_final collected `a` plus the decided assumptions that imply ~a.
          cancel_until(0);
          return Status::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (!next.defined()) {
        next = pick_branch();
        if (!next.defined()) {
          model_ = assigns_;
          cancel_until(0);
          return Status::Sat;
        }
        ++stats_.decisions;
      }
      trail_lim_.push_back(trail_.size());
      assign(next, kNoReason);
    }
  }
}

Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  Clause current;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c') continue;
    if (first == "p") {
      std::string fmt;
      if (!(ls >> fmt >> cnf.num_vars >> declared) || fmt != "cnf") throw std::runtime_error("bad DIMACS header: " + line);
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("DIMACS clause before header");
    std::istringstream cs(line);
    long long d;
    while (cs >> d) {
      if (d == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (static_cast<std::size_t>(d < 0 ? -d : d) > cnf.num_vars)
          throw std::runtime_error("DIMACS literal exceeds declared variable count");
        current.push_back(Lit::from_dimacs(static_cast<int>(d)));
      }
    }
    if (!cs.eof()) throw std::runtime_error("malformed DIMACS line: " + line);
  }
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (!header) throw std::runtime_error("missing DIMACS header");
  return cnf;
}

std::string write_dimacs(const Cnf& cnf, const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const auto& c : comments) out << "c " << c << "\n";
  out << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
  for (const auto& cl : cnf.clauses) {
    for (Lit l : cl) out << l.to_dimacs() << " ";
    out << "0\n";
  }
  return out.str();
}

}  // namespace mtl::sat
