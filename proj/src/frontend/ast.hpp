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
#include <string_view>
#include <vector>

#include "common.hpp"

namespace mtl {

enum class ExprKind { Const, Var, Nondet, Unary, Binary };

enum class Op { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Not, Neg };

const char* op_symbol(Op op);

// Expression tree shared by the surface AST and the normalized program. In
// the AST a Var carries its source name; after normalization `ref` is the
// LocalId it reads and the tree never mentions shared variables.
struct Expr {
  ExprKind kind = ExprKind::Const;
  Op op = Op::Add;
  int64_t value = 0;
  std::string name;
  uint32_t ref = 0;
  std::vector<Expr> args;
  SourceLoc loc;

  static Expr constant(int64_t v, SourceLoc loc = {});
  static Expr var(std::string name, SourceLoc loc = {});
  static Expr local(uint32_t id, std::string name);
  static Expr nondet(SourceLoc loc = {});
  static Expr unary(Op op, Expr operand, SourceLoc loc = {});
  static Expr binary(Op op, Expr lhs, Expr rhs, SourceLoc loc = {});

  friend bool operator==(const Expr& a, const Expr& b);
};

enum class StmtKind { Assign, LocalDecl, If, While, Assert, Assume, Spawn, Join };

struct Stmt {
  StmtKind kind = StmtKind::Assign;
  std::string target;       // assigned / declared / handle name
  std::string thread_name;  // Spawn target
  Expr expr;                // rhs, initializer or condition
  bool has_expr = false;    // LocalDecl with initializer
  std::vector<Stmt> body;   // If-then / While body
  std::vector<Stmt> else_body;
  bool has_else = false;
  bool unwinding = false;   // assume/assert inserted by loop unwinding
  SourceLoc loc;

  friend bool operator==(const Stmt& a, const Stmt& b);
};

struct SharedDecl {
  std::string name;
  int64_t init = 0;
  SourceLoc loc;
};

struct ThreadDef {
  std::string name;
  std::vector<Stmt> body;
  SourceLoc loc;
};

struct Ast {
  std::vector<SharedDecl> shared;
  std::vector<ThreadDef> threads;
  std::vector<Stmt> main_body;

  const ThreadDef* find_thread(std::string_view name) const;
  bool is_shared(std::string_view name) const;
};

// Parses MTL text and resolves every identifier. Throws FrontendError.
Ast parse(std::string_view source);

// Renders the AST back to MTL text (canonical layout, two-space indent).
std::string print(const Ast& ast);
std::string print(const Expr& expr);
std::string print_stmt_head(const Stmt& stmt);

struct UnwindOptions {
  int depth = 1;
  bool unwinding_assertions = false;
  std::size_t statement_budget = 200000;
};

// Replaces every `while` by `depth` guarded copies followed by an unwinding
// assumption (or assertion), and checks the spawn graph for recursion.
Ast inline_and_unwind(const Ast& ast, const UnwindOptions& options);

}  // namespace mtl
