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
#include <string>
#include <vector>

#include "sat/solver.hpp"

namespace mtl::enc {

using sat::Lit;
using Bits = std::vector<Lit>;  // little endian, two's complement

enum class Component : uint8_t { Init, Rho, Zeta, Err, Xi, Kappa };
inline constexpr int kComponentCount = 6;
const char* component_name(Component c);

// Clause list with a per-clause component tag and a name per variable.
// Variable 0 is the constant true, fixed by a unit clause in Init.
class Formula {
 public:
  Formula();

  Lit truth() const { return Lit::make(0); }
  Lit falsity() const { return ~truth(); }
  bool is_const(Lit l) const { return l.var() == 0; }

  Lit new_lit(std::string name = {});
  void add(Component c, sat::Clause clause);
  std::size_t num_vars() const { return symbols_.size(); }
  const std::vector<sat::Clause>& clauses() const { return clauses_; }
  const std::vector<Component>& tags() const { return tags_; }
  const std::string& symbol(sat::Var v) const { return symbols_[v]; }
  std::size_t count(Component c) const { return counts_[static_cast<int>(c)]; }

  // Loads every clause (optionally only some components) into `solver`,
  // creating variables as needed.
  void load(sat::Solver& solver) const;
  sat::Cnf to_cnf(const std::vector<Component>& only = {}) const;

 private:
  std::vector<sat::Clause> clauses_;
  std::vector<Component> tags_;
  std::vector<std::string> symbols_;
  std::size_t counts_[kComponentCount] = {};
};

// Tseitin gates with constant folding over a Formula. Arithmetic wraps at
// the operand width; comparisons are signed and yield 0/1 vectors.
class Circuit {
 public:
  Circuit(Formula& f, int width) : f_(f), width_(width) {}

  void set_component(Component c) { comp_ = c; }
  Component component() const { return comp_; }
  int width() const { return width_; }
  Formula& formula() { return f_; }

  Lit t() const { return f_.truth(); }
  Lit f() const { return f_.falsity(); }

  Bits constant(int64_t v) const;
  Bits fresh(const std::string& name);

  Lit and_(Lit a, Lit b);
  Lit or_(Lit a, Lit b) { return ~and_(~a, ~b); }
  Lit xor_(Lit a, Lit b);
  Lit ite(Lit c, Lit a, Lit b);
  Bits ite(Lit c, const Bits& a, const Bits& b);

  Bits add(const Bits& a, const Bits& b);
  Bits sub(const Bits& a, const Bits& b);
  Bits neg(const Bits& a);
  Bits mul(const Bits& a, const Bits& b);

  Lit eq(const Bits& a, const Bits& b);
  Lit ult(const Bits& a, const Bits& b);
  Lit slt(const Bits& a, const Bits& b);
  Lit nonzero(const Bits& a);
  Bits from_bool(Lit l) const;

  // Clauses forcing a == b, or (guard => a == b).
  void equate(const Bits& a, const Bits& b);
  void equate_if(Lit guard, const Bits& a, const Bits& b);

  void clause(sat::Clause c) { f_.add(comp_, std::move(c)); }

 private:
  Formula& f_;
  int width_;
  Component comp_ = Component::Rho;
};

// Signed value of `bits` under a solver model.
int64_t decode(const Bits& bits, const std::vector<sat::LBool>& model);

}  // namespace mtl::enc
