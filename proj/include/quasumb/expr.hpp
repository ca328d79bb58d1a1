#pragma once

// Expression language in the variables u and v.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' unary)?
//   unary  := '-' unary | atom
//   atom   := number | 'u' | 'v' | 'pi' | ident '(' expr (',' expr)* ')' | '(' expr ')'
//   ident  := sin cos tan atan sinh cosh exp ln sqrt abs integ
//
// integ(g) is the integral of g(s) ds from 0 to the enclosing variable: u at
// top level, or the bound variable s of the enclosing integ when nested.
// Inside an integrand only s may appear; outside, s is an error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "quasumb/error.hpp"

namespace quasumb {

enum class Var { U, V, S };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Tan, Atan, Sinh, Cosh, Exp, Ln, Sqrt, Abs };

inline const char* to_string(Func f) noexcept {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Atan: return "atan";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

struct Node;

/// Immutable, shareable expression tree.
using Expr = std::shared_ptr<const Node>;

struct Constant {
  double value;
  bool is_pi = false;
};
struct Variable {
  Var var;
};
struct Binary {
  BinaryOp op;
  Expr lhs, rhs;
};
struct Negate {
  Expr arg;
};
struct Call {
  Func fn;
  Expr arg;
};
struct Integral {
  Expr integrand;
};

struct Node {
  std::variant<Constant, Variable, Binary, Negate, Call, Integral> data;
};

// --- builders ---------------------------------------------------------------

inline Expr constant(double c) { return std::make_shared<const Node>(Node{Constant{c}}); }
inline Expr pi_constant() {
  return std::make_shared<const Node>(Node{Constant{std::numbers::pi, true}});
}
inline Expr variable(Var v) { return std::make_shared<const Node>(Node{Variable{v}}); }
inline Expr binary(BinaryOp op, Expr a, Expr b) {
  return std::make_shared<const Node>(Node{Binary{op, std::move(a), std::move(b)}});
}
inline Expr negate(Expr a) { return std::make_shared<const Node>(Node{Negate{std::move(a)}}); }
inline Expr call(Func f, Expr a) { return std::make_shared<const Node>(Node{Call{f, std::move(a)}}); }
inline Expr integral(Expr g) { return std::make_shared<const Node>(Node{Integral{std::move(g)}}); }

inline Expr operator+(Expr a, Expr b) { return binary(BinaryOp::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return binary(BinaryOp::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return binary(BinaryOp::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return binary(BinaryOp::Div, std::move(a), std::move(b)); }

// --- structural queries -----------------------------------------------------

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b || a->data.index() != b->data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->data);
        if constexpr (std::is_same_v<T, Constant>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x.var == y.var;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && structurally_equal(x.lhs, y.lhs) && structurally_equal(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, Call>) {
          return x.fn == y.fn && structurally_equal(x.arg, y.arg);
        } else {
          return structurally_equal(x.integrand, y.integrand);
        }
      },
      a->data);
}

/// True if the free (non-integrand) part of e mentions the variable.
inline bool depends_on(const Expr& e, Var var) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return false;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x.var == var;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return depends_on(x.lhs, var) || depends_on(x.rhs, var);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return depends_on(x.arg, var);
        } else if constexpr (std::is_same_v<T, Call>) {
          return depends_on(x.arg, var);
        } else {
          // integ(g) is a function of its upper limit, which is u at top level.
          return var == Var::U;
        }
      },
      e->data);
}

/// Rewrites a top-level function of u into a function of the bound variable
/// s, so it can be used as an integrand. Fails if e depends on v.
inline Expr rebind_u_to_s(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> Expr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return e;
        } else if constexpr (std::is_same_v<T, Variable>) {
          if (x.var == Var::V)
            throw Error(ErrorKind::DegenerateSpec, "expected a function of u alone, found v");
          return x.var == Var::U ? variable(Var::S) : e;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return binary(x.op, rebind_u_to_s(x.lhs), rebind_u_to_s(x.rhs));
        } else if constexpr (std::is_same_v<T, Negate>) {
          return negate(rebind_u_to_s(x.arg));
        } else if constexpr (std::is_same_v<T, Call>) {
          return call(x.fn, rebind_u_to_s(x.arg));
        } else {
          return e;  // the upper limit follows the enclosing variable
        }
      },
      e->data);
}

// --- printing ---------------------------------------------------------------

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Fully parenthesised rendering that parses back to the same tree.
inline std::string to_string(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return x.is_pi ? "pi" : format_number(x.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return x.var == Var::U ? "u" : x.var == Var::V ? "v" : "s";
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr char ops[] = {'+', '-', '*', '/', '^'};
          return "(" + to_string(x.lhs) + ops[static_cast<int>(x.op)] + to_string(x.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + to_string(x.arg) + ")";
        } else if constexpr (std::is_same_v<T, Call>) {
          return std::string(quasumb::to_string(x.fn)) + "(" + to_string(x.arg) + ")";
        } else {
          return "integ(" + to_string(x.integrand) + ")";
        }
      },
      e->data);
}

// --- parsing ----------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail({"expression"}, "empty expression");
    Expr e = parse_expr();
    skip_space();
    if (pos_ < text_.size()) fail({"operator", "end of input"}, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
    throw SyntaxError(pos_, std::move(expected), what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(BinaryOp::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = binary(BinaryOp::Mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = binary(BinaryOp::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    Expr base = parse_unary();
    if (accept('^')) return binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  Expr parse_unary() {
    if (accept('-')) return negate(parse_unary());
    return parse_atom();
  }

  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }

  Expr parse_atom() {
    static const std::vector<std::string> kAtomStart = {"number", "u", "v", "pi", "function", "(", "-"};
    skip_space();
    if (pos_ >= text_.size()) fail(kAtomStart, "unexpected end of input");
    const char c = text_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail({")"}, "unbalanced parenthesis");
      return inner;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "u" || name == "v") {
        if (integ_depth_ > 0) {
          pos_ = start;
          fail({"s"}, "integrand may only use the bound variable s");
        }
        return variable(name == "u" ? Var::U : Var::V);
      }
      if (name == "s") {
        if (integ_depth_ == 0) {
          pos_ = start;
          fail({"u", "v"}, "bound variable s outside integ(...)");
        }
        return variable(Var::S);
      }
      if (name == "pi") return pi_constant();
      return parse_call(name, start);
    }
    fail(kAtomStart, "unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && text_[p] >= '0' && text_[p] <= '9') {
        pos_ = p;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number"}, "malformed number");
    }
    return constant(value);
  }

  Expr parse_call(std::string_view name, std::size_t start) {
    static constexpr std::pair<std::string_view, Func> kFuncs[] = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan}, {"atan", Func::Atan},
        {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"exp", Func::Exp}, {"ln", Func::Ln},
        {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
    };
    std::optional<Func> fn;
    for (const auto& [n, f] : kFuncs)
      if (n == name) fn = f;
    const bool is_integ = name == "integ";
    if (!fn && !is_integ) {
      throw Error(ErrorKind::UnknownFunction,
                  "unknown function '" + std::string(name) + "' at offset " + std::to_string(start));
    }
    if (!accept('(')) fail({"("}, "expected '(' after function name");
    if (is_integ) ++integ_depth_;
    std::vector<Expr> args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    if (is_integ) --integ_depth_;
    if (!accept(')')) fail({")", ","}, "unbalanced parenthesis");
    if (args.size() != 1) {
      throw Error(ErrorKind::ArityError, std::string(name) + " takes 1 argument, got " +
                                             std::to_string(args.size()));
    }
    return is_integ ? integral(args[0]) : call(*fn, args[0]);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int integ_depth_ = 0;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace quasumb
