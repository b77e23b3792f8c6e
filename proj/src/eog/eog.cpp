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

#include "eog/eog.hpp"

#include <algorithm>
#include <deque>
#include <json.hpp>
#include <map>

#include "encoder/encoder.hpp"

namespace mtl::eog {

std::string Eog::lit_name(Lit l) const {
  for (const auto& e : events)
    if (e.guard.defined() && e.guard == l) return e.guard_name;
  for (const auto& r : rf)
    if (r.sel == l) return r.name;
  for (const auto& e : events)
    if (e.guard.defined() && e.guard == ~l) return "!" + e.guard_name;
  return "?" + std::to_string(l.to_dimacs());
}

void Eog::validate() const {
  const auto n = events.size();
  for (auto [a, b] : po)
    if (a >= n || b >= n) throw std::invalid_argument("program-order edge out of range");
  for (const auto& r : rf) {
    if (r.from >= n || r.to >= n) throw std::invalid_argument("read-from edge out of range");
    if (events[r.from].type != Access::Write || events[r.to].type != Access::Read ||
        events[r.from].var != events[r.to].var)
      throw std::invalid_argument("read-from edge " + r.name + " violates its var/type side conditions");
    if (!r.sel.defined()) throw std::invalid_argument("read-from edge without a literal");
  }
}

Eog build_eog(const enc::EncodedProgram& ep, const std::vector<sat::LBool>& model) {
  const NormalizedProgram& p = *ep.program;
  auto holds = [&](Lit l) { return (model[l.var()] == sat::LBool::True) != l.negative(); };
  Eog g;
  std::vector<NodeId> node(ep.events.size(), kNone);
  for (EventId e = 0; e < ep.events.size(); ++e) {
    const auto& ev = ep.events[e];
    if (!holds(ev.guard)) continue;
    node[e] = static_cast<NodeId>(g.events.size());
    EogEvent out;
    out.name = ev.name;
    out.var = p.shared[p.events[e].var].name;
    out.type = p.events[e].type;
    out.thread = p.events[e].thread;
    out.origin = e;
    if (!ep.formula.is_const(ev.guard)) {
      out.guard = ev.guard;
      const std::string& sym = ep.formula.symbol(ev.guard.var());
      out.guard_name = sym.empty() ? "guard(" + ev.name + ")" : sym;
    }
    g.events.push_back(std::move(out));
  }
  for (EventId b = 0; b < ep.events.size(); ++b) {
    if (node[b] == kNone) continue;
    const Bitset& before = ep.po.before[b];
    for (auto a = before.find_first(); a != Bitset::npos; a = before.find_next(a))
      if (node[a] != kNone) g.po.emplace_back(node[a], node[b]);
  }
  std::vector<int> incoming(g.events.size(), 0);
  for (const auto& l : ep.links) {
    if (!holds(l.sel)) continue;
    if (node[l.writer] == kNone || node[l.reader] == kNone)
      throw InternalError("link " + l.name + " selected with an endpoint outside the counterexample");
    g.rf.push_back({node[l.writer], node[l.reader], l.sel, l.name});
    ++incoming[node[l.reader]];
  }
  for (NodeId v = 0; v < g.events.size(); ++v)
    if (g.events[v].type == Access::Read && incoming[v] != 1)
      throw InternalError("read " + g.events[v].name + " has " + std::to_string(incoming[v]) + " read-from edges");
  return g;
}

bool antichain_insert(std::vector<Reason>& chain, Reason r) {
  for (const auto& o : chain)
    if (std::includes(r.begin(), r.end(), o.begin(), o.end())) return false;
  std::erase_if(chain, [&](const Reason& o) { return std::includes(o.begin(), o.end(), r.begin(), r.end()); });
  chain.push_back(std::move(r));
  return true;
}

namespace {

bool reason_less(const Reason& a, const Reason& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Reason unite(const Reason& a, const Reason& b) {
  Reason out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

class Closure {
 public:
  Closure(const Eog& g, const ClosureOptions& opts) : g_(g), opts_(opts), n_(g.events.size()) {
    out_.node_count = n_;
    out_.before.assign(n_, Bitset(n_));
    after_.assign(n_, Bitset(n_));
    std::map<std::string, int> ids;
    for (const auto& e : g.events) var_.push_back(ids.emplace(e.var, static_cast<int>(ids.size())).first->second);
    rf_to_.resize(n_);
    rf_from_.resize(n_);
    active_.assign(g.rf.size(), false);
  }

  ClosureOutcome run() {
    // Program orders first, closed under transitivity here (graphs built
    // from a program already are), so they only need to meet other orders
    // and read-from edges later. Each rests on the guards of its endpoints.
    std::vector<Bitset> reach(n_, Bitset(n_));
    for (auto [a, b] : g_.po) reach[a].set(b);
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t i = 0; i < n_; ++i)
        if (reach[i].test(k)) reach[i] |= reach[k];
    for (NodeId a = 0; a < n_; ++a)
      for (auto x = reach[a].find_first(); x != Bitset::npos; x = reach[a].find_next(x)) {
        const auto b = static_cast<NodeId>(x);
        Reason r;
        if (g_.events[a].guard.defined()) r.push_back(g_.events[a].guard);
        if (g_.events[b].guard.defined()) r.push_back(g_.events[b].guard);
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        add(a, b, std::move(r), false);
      }
    for (uint32_t k = 0; k < g_.rf.size(); ++k) {
      activate(k);
      drain();
    }
    for (NodeId e = 0; e < n_; ++e)
      if (out_.before[e].test(e)) out_.conflicts.push_back(e);
    out_.verdict = out_.conflicts.empty() ? ClosureVerdict::NotSure : ClosureVerdict::Infeasible;
    return std::move(out_);
  }

 private:
  struct Item {
    NodeId a, b;
    Reason r;
  };

  uint64_t key(NodeId a, NodeId b) const { return static_cast<uint64_t>(a) * n_ + b; }

  bool is_write(NodeId v) const { return g_.events[v].type == Access::Write; }

  void add(NodeId a, NodeId b, Reason r, bool enqueue = true) {
    ++work_;
    auto& chain = out_.reasons[key(a, b)];
    const bool fresh = chain.empty();
    if (!fresh && work_ > opts_.work_budget) {
      out_.reasons_truncated = true;
      return;
    }
    if (!antichain_insert(chain, r)) return;
    if (chain.size() > opts_.reason_cap) {
      out_.reasons_truncated = true;
      std::sort(chain.begin(), chain.end(), reason_less);
      chain.resize(opts_.reason_cap);
      if (std::find(chain.begin(), chain.end(), r) == chain.end()) return;
    }
    if (fresh) {
      out_.before[b].set(a);
      after_[a].set(b);
    }
    if (enqueue && a != b) {
      if (opts_.policy == Worklist::Fifo)
        queue_.push_back({a, b, std::move(r)});
      else
        queue_.push_front({a, b, std::move(r)});
    }
  }

  void activate(uint32_t k) {
    active_[k] = true;
    const RfEdge& e = g_.rf[k];
    rf_to_[e.to].push_back(k);
    rf_from_[e.from].push_back(k);
    add(e.from, e.to, Reason{e.sel});
    const Reason sel{e.sel};
    // Rule 2 against orders e3 < read already present.
    Bitset pre = out_.before[e.to];
    for (auto x = pre.find_first(); x != Bitset::npos; x = pre.find_next(x)) {
      NodeId e3 = static_cast<NodeId>(x);
      if (e3 == e.from || !is_write(e3) || var_[e3] != var_[e.from]) continue;
      auto chain = out_.reasons[key(e3, e.to)];
      for (const auto& r : chain) add(e3, e.from, unite(r, sel));
    }
    // Rule 3 against orders write < e3 already present.
    Bitset post = after_[e.from];
    for (auto x = post.find_first(); x != Bitset::npos; x = post.find_next(x)) {
      NodeId e3 = static_cast<NodeId>(x);
      if (e3 == e.from || !is_write(e3) || var_[e3] != var_[e.from]) continue;
      auto chain = out_.reasons[key(e.from, e3)];
      for (const auto& r : chain) add(e.to, e3, unite(r, sel));
    }
  }

  void drain() {
    while (!queue_.empty()) {
      Item it = std::move(queue_.front());
      queue_.pop_front();
      process(it);
    }
  }

  void process(const Item& it) {
    const NodeId a = it.a, b = it.b;
    {
      const auto& chain = out_.reasons[key(a, b)];
      if (std::find(chain.begin(), chain.end(), it.r) == chain.end()) return;  // since subsumed
    }
    // Rule 1, both directions.
    Bitset succ = after_[b];
    for (auto x = succ.find_first(); x != Bitset::npos; x = succ.find_next(x)) {
      NodeId c = static_cast<NodeId>(x);
      auto chain = out_.reasons[key(b, c)];
      for (const auto& r2 : chain) add(a, c, unite(it.r, r2));
    }
    Bitset pred = out_.before[a];
    for (auto x = pred.find_first(); x != Bitset::npos; x = pred.find_next(x)) {
      NodeId c = static_cast<NodeId>(x);
      auto chain = out_.reasons[key(c, a)];
      for (const auto& r2 : chain) add(c, b, unite(r2, it.r));
    }
    // Rule 2: a < b where b reads from e1 and a writes the same variable.
    if (is_write(a)) {
      for (uint32_t k : rf_to_[b]) {
        const RfEdge& e = g_.rf[k];
        if (a != e.from && var_[a] == var_[e.from]) add(a, e.from, unite(it.r, Reason{e.sel}));
      }
    }
    // Rule 3: a < b where a is read from by e2 and b writes the same variable.
    if (is_write(b)) {
      for (uint32_t k : rf_from_[a]) {
        const RfEdge& e = g_.rf[k];
        if (b != a && var_[b] == var_[a]) add(e.to, b, unite(it.r, Reason{e.sel}));
      }
    }
  }

  const Eog& g_;
  const ClosureOptions& opts_;
  const std::size_t n_;
  ClosureOutcome out_;
  std::vector<Bitset> after_;
  std::vector<int> var_;
  std::vector<std::vector<uint32_t>> rf_to_, rf_from_;
  std::vector<bool> active_;
  std::deque<Item> queue_;
  std::size_t work_ = 0;
};

}  // namespace

const std::vector<Reason>& ClosureOutcome::reasons_of(NodeId a, NodeId b) const {
  static const std::vector<Reason> kEmpty;
  auto it = reasons.find(static_cast<uint64_t>(a) * node_count + b);
  return it == reasons.end() ? kEmpty : it->second;
}

std::vector<std::pair<NodeId, NodeId>> ClosureOutcome::orders() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId a = 0; a < node_count; ++a)
    for (NodeId b = 0; b < node_count; ++b)
      if (before[b].test(a)) out.emplace_back(a, b);
  return out;
}

ClosureOutcome closure(const Eog& g, const ClosureOptions& options) {
  g.validate();
  return Closure(g, options).run();
}

std::vector<sat::Clause> refine(const ClosureOutcome& outcome) {
  if (outcome.verdict != ClosureVerdict::Infeasible) throw InternalError("refine called on a NotSure outcome");
  std::vector<Reason> all;
  for (NodeId e : outcome.conflicts)
    for (const auto& r : outcome.reasons_of(e, e)) antichain_insert(all, r);
  std::sort(all.begin(), all.end(), reason_less);
  std::vector<sat::Clause> kappa;
  for (const auto& r : all) {
    if (r.empty()) throw InternalError("conflict with an empty kernel reason");
    sat::Clause c;
    for (Lit l : r) c.push_back(~l);
    kappa.push_back(std::move(c));
  }
  return kappa;
}

bool satisfies_requirements(const Eog& g, const std::vector<NodeId>& order) {
  const std::size_t n = g.events.size();
  if (order.size() != n) return false;
  std::vector<std::size_t> pos(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || pos[order[i]] != SIZE_MAX) return false;
    pos[order[i]] = i;
  }
  for (auto [a, b] : g.po)
    if (pos[a] >= pos[b]) return false;
  for (const auto& r : g.rf) {
    if (pos[r.from] >= pos[r.to]) return false;
    for (NodeId w = 0; w < n; ++w) {
      if (w == r.from || g.events[w].type != Access::Write || g.events[w].var != g.events[r.from].var) continue;
      if (pos[r.from] < pos[w] && pos[w] < pos[r.to]) return false;
    }
  }
  return true;
}

std::string to_json(const Eog& g) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["events"] = ordered_json::array();
  for (NodeId i = 0; i < g.events.size(); ++i) {
    const auto& e = g.events[i];
    ordered_json ev;
    ev["id"] = i;
    ev["name"] = e.name;
    ev["var"] = e.var;
    ev["type"] = e.type == Access::Read ? "R" : "W";
    ev["thread"] = e.thread;
    if (e.guard.defined()) {
      ev["guard"] = e.guard.to_dimacs();
      ev["guard_name"] = e.guard_name;
    } else {
      ev["guard"] = nullptr;
    }
    j["events"].push_back(ev);
  }
  j["po"] = ordered_json::array();
  for (auto [a, b] : g.po) j["po"].push_back({a, b});
  j["rf"] = ordered_json::array();
  for (const auto& r : g.rf) j["rf"].push_back({{"from", r.from}, {"to", r.to}, {"sel", r.sel.to_dimacs()}, {"name", r.name}});
  return j.dump(2);
}

Eog eog_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed EOG JSON: ") + ex.what());
  }
  Eog g;
  try {
    std::map<int, NodeId> ids;
    for (const auto& ev : j.at("events")) {
      EogEvent e;
      e.name = ev.at("name").get<std::string>();
      e.var = ev.at("var").get<std::string>();
      const std::string type = ev.at("type").get<std::string>();
      if (type != "R" && type != "W") throw std::invalid_argument("event type must be R or W");
      e.type = type == "R" ? Access::Read : Access::Write;
      e.thread = ev.value("thread", 0u);
      if (ev.contains("guard") && !ev.at("guard").is_null()) {
        e.guard = Lit::from_dimacs(ev.at("guard").get<int>());
        e.guard_name = ev.value("guard_name", "g" + std::to_string(ev.at("guard").get<int>()));
      }
      int id = ev.value("id", static_cast<int>(g.events.size()));
      ids[id] = static_cast<NodeId>(g.events.size());
      g.events.push_back(std::move(e));
    }
    auto node = [&](int id) {
      auto it = ids.find(id);
      if (it == ids.end()) throw std::invalid_argument("unknown event id " + std::to_string(id));
      return it->second;
    };
    for (const auto& p : j.at("po")) g.po.emplace_back(node(p.at(0).get<int>()), node(p.at(1).get<int>()));
    for (const auto& r : j.at("rf")) {
      RfEdge e;
      e.from = node(r.at("from").get<int>());
      e.to = node(r.at("to").get<int>());
      e.sel = Lit::from_dimacs(r.at("sel").get<int>());
      e.name = r.value("name", "s" + std::to_string(r.at("sel").get<int>()));
      g.rf.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed EOG JSON: ") + ex.what());
  }
  g.validate();
  return g;
}

}  // namespace mtl::eog
