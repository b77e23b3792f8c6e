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

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "frontend/ast.hpp"

namespace mtl {

std::string to_string(const SourceLoc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

FrontendError::FrontendError(SourceLoc loc, const std::string& what)
    : std::runtime_error(to_string(loc) + ": " + what), loc_(loc) {}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::Not: return "!";
    case Op::Neg: return "-";
  }
  return "?";
}

Expr Expr::constant(int64_t v, SourceLoc loc) {
  Expr e;
  e.kind = ExprKind::Const;
  e.value = v;
  e.loc = loc;
  return e;
}

Expr Expr::var(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  e.ref = UINT32_MAX;
  e.loc = loc;
  return e;
}

Expr Expr::local(uint32_t id, std::string name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.ref = id;
  e.name = std::move(name);
  return e;
}

Expr Expr::nondet(SourceLoc loc) {
  Expr e;
  e.kind = ExprKind::Nondet;
  e.loc = loc;
  return e;
}

Expr Expr::unary(Op op, Expr operand, SourceLoc loc) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.op = op;
  e.loc = loc;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs, SourceLoc loc) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = op;
  e.loc = loc;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

// Structural equality; source positions are ignored.
bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Const: return a.value == b.value;
    case ExprKind::Var: return a.name == b.name && a.ref == b.ref;
    case ExprKind::Nondet: return true;
    case ExprKind::Unary:
    case ExprKind::Binary: return a.op == b.op && a.args == b.args;
  }
  return false;
}

bool operator==(const Stmt& a, const Stmt& b) {
  return a.kind == b.kind && a.target == b.target && a.thread_name == b.thread_name &&
         a.has_expr == b.has_expr && (!a.has_expr || a.expr == b.expr) && a.body == b.body &&
         a.has_else == b.has_else && a.else_body == b.else_body && a.unwinding == b.unwinding;
}

const ThreadDef* Ast::find_thread(std::string_view name) const {
  for (const auto& t : threads)
    if (t.name == name) return &t;
  return nullptr;
}

bool Ast::is_shared(std::string_view name) const {
  for (const auto& s : shared)
    if (s.name == name) return true;
  return false;
}

namespace {

enum class Tok {
  Ident, Int, Shared, KwInt, Thread, Main, Local, If, Else, While, Assert, Assume, Spawn,
  Join, Nondet, LBrace, RBrace, LParen, RParen, Semi, Assign, Plus, Minus, Star, EqEq,
  NotEq, Less, LessEq, Greater, GreaterEq, AndAnd, OrOr, Bang, End
};

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  SourceLoc loc;
};

const std::map<std::string, Tok, std::less<>>& keywords() {
  static const std::map<std::string, Tok, std::less<>> kw = {
      {"shared", Tok::Shared}, {"int", Tok::KwInt},     {"thread", Tok::Thread},
      {"main", Tok::Main},     {"local", Tok::Local},   {"if", Tok::If},
      {"else", Tok::Else},     {"while", Tok::While},   {"assert", Tok::Assert},
      {"assume", Tok::Assume}, {"spawn", Tok::Spawn},   {"join", Tok::Join},
      {"nondet", Tok::Nondet}};
  return kw;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      SourceLoc start{line, col};
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) throw FrontendError(start, "unterminated comment");
      advance(2);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      auto it = keywords().find(word);
      out.push_back({it == keywords().end() ? Tok::Ident : it->second, word, 0, loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      int64_t v = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        int d = src[j] - '0';
        if (v > (INT64_MAX - d) / 10) throw FrontendError(loc, "integer literal too large");
        v = v * 10 + d;
        ++j;
      }
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), v, loc});
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < src.size() && src[i + 1] == b; };
    Tok t;
    size_t n = 1;
    if (two('=', '=')) { t = Tok::EqEq; n = 2; }
    else if (two('!', '=')) { t = Tok::NotEq; n = 2; }
    else if (two('<', '=')) { t = Tok::LessEq; n = 2; }
    else if (two('>', '=')) { t = Tok::GreaterEq; n = 2; }
    else if (two('&', '&')) { t = Tok::AndAnd; n = 2; }
    else if (two('|', '|')) { t = Tok::OrOr; n = 2; }
    else {
      switch (c) {
        case '{': t = Tok::LBrace; break;
        case '}': t = Tok::RBrace; break;
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case ';': t = Tok::Semi; break;
        case '=': t = Tok::Assign; break;
        case '+': t = Tok::Plus; break;
        case '-': t = Tok::Minus; break;
        case '*': t = Tok::Star; break;
        case '<': t = Tok::Less; break;
        case '>': t = Tok::Greater; break;
        case '!': t = Tok::Bang; break;
        default:
          throw FrontendError(loc, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({t, std::string(src.substr(i, n)), 0, loc});
    advance(n);
  }
  out.push_back({Tok::End, "<end of input>", 0, {line, col}});
  return out;
}

// Per-declaration bookkeeping used for the handle discipline checks.
struct LocalInfo {
  std::string name;
  SourceLoc decl_loc;
  bool has_init = false;
  std::optional<SourceLoc> used_in_expr;
  std::optional<SourceLoc> assigned;
  std::optional<SourceLoc> spawned;
  int joins = 0;
  SourceLoc join_loc;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Ast run() {
    while (peek().kind == Tok::Shared) parse_shared();
    while (peek().kind == Tok::Thread) parse_thread();
    expect(Tok::Main, "'main'");
    ast_.main_body = parse_body();
    if (peek().kind != Tok::End)
      throw FrontendError(peek().loc, "unexpected '" + peek().text + "' after main");
    for (const auto& [name, loc] : spawn_refs_)
      if (!ast_.find_thread(name)) throw FrontendError(loc, "spawn of undefined thread '" + name + "'");
    return std::move(ast_);
  }

 private:
  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok t) {
    if (peek().kind != t) return false;
    ++pos_;
    return true;
  }
  Token expect(Tok t, const char* what) {
    if (peek().kind != t)
      throw FrontendError(peek().loc, std::string("expected ") + what + ", found '" + peek().text + "'");
    return take();
  }

  void parse_shared() {
    take();
    expect(Tok::KwInt, "'int'");
    Token id = expect(Tok::Ident, "identifier");
    SharedDecl d{id.text, 0, id.loc};
    if (accept(Tok::Assign)) {
      bool neg = accept(Tok::Minus);
      Token v = expect(Tok::Int, "integer initializer");
      d.init = neg ? -v.value : v.value;
    }
    expect(Tok::Semi, "';'");
    if (ast_.is_shared(d.name)) throw FrontendError(id.loc, "duplicate declaration of '" + d.name + "'");
    ast_.shared.push_back(std::move(d));
  }

  void parse_thread() {
    take();
    Token id = expect(Tok::Ident, "thread name");
    if (ast_.find_thread(id.text) || ast_.is_shared(id.text))
      throw FrontendError(id.loc, "duplicate declaration of '" + id.text + "'");
    ThreadDef def{id.text, {}, id.loc};
    ast_.threads.push_back(def);
    auto body = parse_body();
    ast_.threads.back().body = std::move(body);
  }

  // A thread or main body: fresh local namespace, handle checks at the end.
  std::vector<Stmt> parse_body() {
    locals_.clear();
    scopes_.clear();
    auto body = parse_block();
    for (const auto& info : locals_) {
      if (!info.spawned) {
        if (info.joins > 0)
          throw FrontendError(info.join_loc, "join of a never-spawned handle '" + info.name + "'");
        continue;
      }
      if (info.has_init)
        throw FrontendError(info.decl_loc, "handle '" + info.name + "' must be declared without initializer");
      if (info.used_in_expr)
        throw FrontendError(*info.used_in_expr, "handle '" + info.name + "' used in an expression");
      if (info.assigned)
        throw FrontendError(*info.assigned, "handle '" + info.name + "' assigned a non-spawn value");
      if (info.joins > 1)
        throw FrontendError(info.join_loc, "handle '" + info.name + "' joined more than once");
    }
    return body;
  }

  std::vector<Stmt> parse_block() {
    expect(Tok::LBrace, "'{'");
    scopes_.emplace_back();
    std::vector<Stmt> out;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) throw FrontendError(peek().loc, "unexpected end of input, expected '}'");
      out.push_back(parse_stmt());
    }
    take();
    scopes_.pop_back();
    return out;
  }

  std::optional<size_t> lookup_local(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return std::nullopt;
  }

  Stmt parse_stmt() {
    const Token& t = peek();
    Stmt s;
    s.loc = t.loc;
    switch (t.kind) {
      case Tok::Local: {
        take();
        expect(Tok::KwInt, "'int'");
        Token id = expect(Tok::Ident, "identifier");
        if (lookup_local(id.text) || ast_.is_shared(id.text) || ast_.find_thread(id.text))
          throw FrontendError(id.loc, "duplicate declaration of '" + id.text + "'");
        s.kind = StmtKind::LocalDecl;
        s.target = id.text;
        LocalInfo info;
        info.name = id.text;
        info.decl_loc = id.loc;
        if (accept(Tok::Assign)) {
          // The initializer may not mention the variable being declared.
          s.expr = parse_expr();
          s.has_expr = true;
          info.has_init = true;
        }
        expect(Tok::Semi, "';'");
        locals_.push_back(info);
        scopes_.back()[id.text] = locals_.size() - 1;
        return s;
      }
      case Tok::If: {
        take();
        expect(Tok::LParen, "'('");
        s.kind = StmtKind::If;
        s.expr = parse_expr();
        s.has_expr = true;
        expect(Tok::RParen, "')'");
        s.body = parse_block();
        if (accept(Tok::Else)) {
          s.has_else = true;
          if (peek().kind == Tok::If) {
            s.else_body.push_back(parse_stmt());
          } else {
            s.else_body = parse_block();
          }
        }
        return s;
      }
      case Tok::While: {
        take();
        expect(Tok::LParen, "'('");
        s.kind = StmtKind::While;
        s.expr = parse_expr();
        s.has_expr = true;
        expect(Tok::RParen, "')'");
        s.body = parse_block();
        return s;
      }
      case Tok::Assert:
      case Tok::Assume: {
        take();
        s.kind = t.kind == Tok::Assert ? StmtKind::Assert : StmtKind::Assume;
        expect(Tok::LParen, "'('");
        s.expr = parse_expr();
        s.has_expr = true;
        expect(Tok::RParen, "')'");
        expect(Tok::Semi, "';'");
        return s;
      }
      case Tok::Join: {
        take();
        Token id = expect(Tok::Ident, "handle");
        auto idx = lookup_local(id.text);
        if (!idx) throw FrontendError(id.loc, "undeclared identifier '" + id.text + "'");
        auto& info = locals_[*idx];
        if (info.joins++ == 0) info.join_loc = id.loc;
        s.kind = StmtKind::Join;
        s.target = id.text;
        expect(Tok::Semi, "';'");
        return s;
      }
      case Tok::Ident: {
        Token id = take();
        expect(Tok::Assign, "'='");
        s.target = id.text;
        if (accept(Tok::Spawn)) {
          Token th = expect(Tok::Ident, "thread name");
          expect(Tok::Semi, "';'");
          auto idx = lookup_local(id.text);
          if (!idx) {
            if (ast_.is_shared(id.text))
              throw FrontendError(id.loc, "spawn handle '" + id.text + "' must be a local");
            throw FrontendError(id.loc, "undeclared identifier '" + id.text + "'");
          }
          if (!locals_[*idx].spawned) locals_[*idx].spawned = id.loc;
          s.kind = StmtKind::Spawn;
          s.thread_name = th.text;
          spawn_refs_.emplace_back(th.text, th.loc);
          return s;
        }
        auto idx = lookup_local(id.text);
        if (idx) {
          if (!locals_[*idx].assigned) locals_[*idx].assigned = id.loc;
        } else if (!ast_.is_shared(id.text)) {
          throw FrontendError(id.loc, "undeclared identifier '" + id.text + "'");
        }
        s.kind = StmtKind::Assign;
        s.expr = parse_expr();
        s.has_expr = true;
        expect(Tok::Semi, "';'");
        return s;
      }
      default:
        throw FrontendError(t.loc, "expected statement, found '" + t.text + "'");
    }
  }

  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (peek().kind == Tok::OrOr) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::Or, std::move(lhs), parse_and(), loc);
    }
    return lhs;
  }

  Expr parse_and() {
    Expr lhs = parse_equality();
    while (peek().kind == Tok::AndAnd) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::And, std::move(lhs), parse_equality(), loc);
    }
    return lhs;
  }

  Expr parse_equality() {
    Expr lhs = parse_relational();
    while (peek().kind == Tok::EqEq || peek().kind == Tok::NotEq) {
      Token op = take();
      lhs = Expr::binary(op.kind == Tok::EqEq ? Op::Eq : Op::Ne, std::move(lhs), parse_relational(), op.loc);
    }
    return lhs;
  }

  Expr parse_relational() {
    Expr lhs = parse_additive();
    for (;;) {
      Op op;
      switch (peek().kind) {
        case Tok::Less: op = Op::Lt; break;
        case Tok::LessEq: op = Op::Le; break;
        case Tok::Greater: op = Op::Gt; break;
        case Tok::GreaterEq: op = Op::Ge; break;
        default: return lhs;
      }
      SourceLoc loc = take().loc;
      lhs = Expr::binary(op, std::move(lhs), parse_additive(), loc);
    }
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      Token op = take();
      lhs = Expr::binary(op.kind == Tok::Plus ? Op::Add : Op::Sub, std::move(lhs), parse_multiplicative(), op.loc);
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::Star) {
      SourceLoc loc = take().loc;
      lhs = Expr::binary(Op::Mul, std::move(lhs), parse_unary(), loc);
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::Bang) {
      SourceLoc loc = take().loc;
      return Expr::unary(Op::Not, parse_unary(), loc);
    }
    if (peek().kind == Tok::Minus) {
      SourceLoc loc = take().loc;
      if (peek().kind == Tok::Int) return Expr::constant(-take().value, loc);
      return Expr::unary(Op::Neg, parse_unary(), loc);
    }
    return parse_primary();
  }

  Expr parse_primary() {
    Token t = take();
    switch (t.kind) {
      case Tok::Int: return Expr::constant(t.value, t.loc);
      case Tok::Nondet:
        expect(Tok::LParen, "'('");
        expect(Tok::RParen, "')'");
        return Expr::nondet(t.loc);
      case Tok::LParen: {
        Expr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        if (auto idx = lookup_local(t.text)) {
          if (!locals_[*idx].used_in_expr) locals_[*idx].used_in_expr = t.loc;
        } else if (!ast_.is_shared(t.text)) {
          throw FrontendError(t.loc, "undeclared identifier '" + t.text + "'");
        }
        return Expr::var(t.text, t.loc);
      }
      default:
        throw FrontendError(t.loc, "expected expression, found '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  Ast ast_;
  std::vector<LocalInfo> locals_;
  std::vector<std::map<std::string, size_t>> scopes_;
  std::vector<std::pair<std::string, SourceLoc>> spawn_refs_;
};

int precedence(const Expr& e) {
  if (e.kind != ExprKind::Binary) return 10;
  switch (e.op) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Eq:
    case Op::Ne: return 3;
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return 4;
    case Op::Add:
    case Op::Sub: return 5;
    case Op::Mul: return 6;
    default: return 10;
  }
}

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::Const:
      if (e.value < 0) {
        os << "(" << e.value << ")";
      } else {
        os << e.value;
      }
      return;
    case ExprKind::Var: os << e.name; return;
    case ExprKind::Nondet: os << "nondet()"; return;
    case ExprKind::Unary: {
      os << op_symbol(e.op);
      const Expr& a = e.args[0];
      bool paren = a.kind == ExprKind::Binary;
      if (paren) os << "(";
      print_expr(os, a);
      if (paren) os << ")";
      return;
    }
    case ExprKind::Binary: {
      int p = precedence(e);
      bool lp = precedence(e.args[0]) < p;
      bool rp = precedence(e.args[1]) <= p;  // all operators are left-associative
      if (lp) os << "(";
      print_expr(os, e.args[0]);
      if (lp) os << ")";
      os << " " << op_symbol(e.op) << " ";
      if (rp) os << "(";
      print_expr(os, e.args[1]);
      if (rp) os << ")";
      return;
    }
  }
}

void print_block(std::ostream& os, const std::vector<Stmt>& body, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent * 2, ' ');
  switch (s.kind) {
    case StmtKind::If:
      os << pad << "if (" << print(s.expr) << ") {\n";
      print_block(os, s.body, indent + 1);
      os << pad << "}";
      if (s.has_else) {
        os << " else {\n";
        print_block(os, s.else_body, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      return;
    case StmtKind::While:
      os << pad << "while (" << print(s.expr) << ") {\n";
      print_block(os, s.body, indent + 1);
      os << pad << "}\n";
      return;
    default:
      os << pad << print_stmt_head(s) << "\n";
  }
}

void print_block(std::ostream& os, const std::vector<Stmt>& body, int indent) {
  for (const auto& s : body) print_stmt(os, s, indent);
}

}  // namespace

Ast parse(std::string_view source) { return Parser(source).run(); }

std::string print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string print_stmt_head(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Assign: return s.target + " = " + print(s.expr) + ";";
    case StmtKind::LocalDecl:
      return "local int " + s.target + (s.has_expr ? " = " + print(s.expr) : std::string()) + ";";
    case StmtKind::Assert: return "assert(" + print(s.expr) + ");";
    case StmtKind::Assume: return "assume(" + print(s.expr) + ");";
    case StmtKind::Spawn: return s.target + " = spawn " + s.thread_name + ";";
    case StmtKind::Join: return "join " + s.target + ";";
    case StmtKind::If: return "if (" + print(s.expr) + ")";
    case StmtKind::While: return "while (" + print(s.expr) + ")";
  }
  return {};
}

std::string print(const Ast& ast) {
  std::ostringstream os;
  for (const auto& s : ast.shared) os << "shared int " << s.name << " = " << s.init << ";\n";
  for (const auto& t : ast.threads) {
    os << "thread " << t.name << " {\n";
    print_block(os, t.body, 1);
    os << "}\n";
  }
  os << "main {\n";
  print_block(os, ast.main_body, 1);
  os << "}\n";
  return os.str();
}

}  // namespace mtl
