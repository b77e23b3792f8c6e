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

#include "encoder/bitblast.hpp"

#include <algorithm>

namespace mtl::enc {

const char* component_name(Component c) {
  switch (c) {
    case Component::Init: return "init";
    case Component::Rho: return "rho";
    case Component::Zeta: return "zeta";
    case Component::Err: return "err";
    case Component::Xi: return "xi";
    case Component::Kappa: return "kappa";
  }
  return "?";
}

Formula::Formula() {
  symbols_.push_back("true");
  add(Component::Init, {truth()});
}

Lit Formula::new_lit(std::string name) {
  symbols_.push_back(std::move(name));
  return Lit::make(static_cast<sat::Var>(symbols_.size() - 1));
}

void Formula::add(Component c, sat::Clause clause) {
  clauses_.push_back(std::move(clause));
  tags_.push_back(c);
  ++counts_[static_cast<int>(c)];
}

void Formula::load(sat::Solver& solver) const {
  while (solver.num_vars() < num_vars()) solver.new_var();
  for (const auto& c : clauses_) solver.add_clause(c);
}

sat::Cnf Formula::to_cnf(const std::vector<Component>& only) const {
  sat::Cnf cnf;
  cnf.num_vars = num_vars();
  for (std::size_t i = 0; i < clauses_.size(); ++i)
    if (only.empty() || std::find(only.begin(), only.end(), tags_[i]) != only.end()) cnf.clauses.push_back(clauses_[i]);
  return cnf;
}

Bits Circuit::constant(int64_t v) const {
  Bits out;
  for (int i = 0; i < width_; ++i) out.push_back(((static_cast<uint64_t>(v) >> i) & 1) ? t() : f());
  return out;
}

Bits Circuit::fresh(const std::string& name) {
  Bits out;
  for (int i = 0; i < width_; ++i) out.push_back(f_.new_lit(name + "[" + std::to_string(i) + "]"));
  return out;
}

Lit Circuit::and_(Lit a, Lit b) {
  if (a == f() || b == f() || a == ~b) return f();
  if (a == t() || a == b) return b;
  if (b == t()) return a;
  Lit g = f_.new_lit();
  clause({~g, a});
  clause({~g, b});
  clause({g, ~a, ~b});
  return g;
}

Lit Circuit::xor_(Lit a, Lit b) {
  if (a == f()) return b;
  if (b == f()) return a;
  if (a == t()) return ~b;
  if (b == t()) return ~a;
  if (a == b) return f();
  if (a == ~b) return t();
  Lit g = f_.new_lit();
  clause({~g, a, b});
  clause({~g, ~a, ~b});
  clause({g, ~a, b});
  clause({g, a, ~b});
  return g;
}

Lit Circuit::ite(Lit c, Lit a, Lit b) {
  if (c == t() || a == b) return a;
  if (c == f()) return b;
  if (a == t() && b == f()) return c;
  if (a == f() && b == t()) return ~c;
  Lit g = f_.new_lit();
  clause({~c, ~a, g});
  clause({~c, a, ~g});
  clause({c, ~b, g});
  clause({c, b, ~g});
  return g;
}

Bits Circuit::ite(Lit c, const Bits& a, const Bits& b) {
  Bits out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(ite(c, a[i], b[i]));
  return out;
}

Bits Circuit::add(const Bits& a, const Bits& b) {
  Bits out;
  Lit carry = f();
  for (std::size_t i = 0; i < a.size(); ++i) {
    Lit x = xor_(a[i], b[i]);
    out.push_back(xor_(x, carry));
    if (i + 1 < a.size()) carry = or_(and_(a[i], b[i]), and_(carry, x));
  }
  return out;
}

Bits Circuit::neg(const Bits& a) {
  Bits inv;
  for (Lit l : a) inv.push_back(~l);
  return add(inv, constant(1));
}

Bits Circuit::sub(const Bits& a, const Bits& b) {
  Bits inv;
  for (Lit l : b) inv.push_back(~l);
  // a + ~b + 1
  Bits out;
  Lit carry = t();
  for (std::size_t i = 0; i < a.size(); ++i) {
    Lit x = xor_(a[i], inv[i]);
    out.push_back(xor_(x, carry));
    if (i + 1 < a.size()) carry = or_(and_(a[i], inv[i]), and_(carry, x));
  }
  return out;
}

Bits Circuit::mul(const Bits& a, const Bits& b) {
  Bits acc = constant(0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Bits partial(a.size(), f());
    for (std::size_t j = 0; j + i < a.size(); ++j) partial[j + i] = and_(a[j], b[i]);
    acc = add(acc, partial);
  }
  return acc;
}

Lit Circuit::eq(const Bits& a, const Bits& b) {
  Lit r = t();
  for (std::size_t i = 0; i < a.size(); ++i) r = and_(r, ~xor_(a[i], b[i]));
  return r;
}

Lit Circuit::ult(const Bits& a, const Bits& b) {
  Lit lt = f();
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Higher bits decide; equal higher bits defer to the lower result.
    Lit here = and_(~a[i], b[i]);
    Lit same = ~xor_(a[i], b[i]);
    lt = or_(here, and_(same, lt));
  }
  return lt;
}

Lit Circuit::slt(const Bits& a, const Bits& b) {
  Bits fa = a, fb = b;
  fa.back() = ~fa.back();
  fb.back() = ~fb.back();
  return ult(fa, fb);
}

Lit Circuit::nonzero(const Bits& a) {
  Lit r = f();
  for (Lit l : a) r = or_(r, l);
  return r;
}

Bits Circuit::from_bool(Lit l) const {
  Bits out = constant(0);
  out[0] = l;
  return out;
}

void Circuit::equate(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    clause({~a[i], b[i]});
    clause({a[i], ~b[i]});
  }
}

void Circuit::equate_if(Lit guard, const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    clause({~guard, ~a[i], b[i]});
    clause({~guard, a[i], ~b[i]});
  }
}

int64_t decode(const Bits& bits, const std::vector<sat::LBool>& model) {
  uint64_t u = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    sat::LBool b = model[bits[i].var()];
    bool v = (b == sat::LBool::True) != bits[i].negative();
    if (v) u |= uint64_t{1} << i;
  }
  const int w = static_cast<int>(bits.size());
  if (w < 64 && (u >> (w - 1)) & 1) u |= ~((uint64_t{1} << w) - 1);
  return static_cast<int64_t>(u);
}

}  // namespace mtl::enc
