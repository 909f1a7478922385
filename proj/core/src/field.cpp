#include "lorch/field.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace lorch {

namespace {

Expr node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

Expr make_const(double v) {
  ExprNode n;
  n.kind = ExprKind::Const;
  n.value = v;
  return node(std::move(n));
}

Expr make_var(int i) {
  ExprNode n;
  n.kind = ExprKind::Var;
  n.var = i;
  return node(std::move(n));
}

Expr make_binary(ExprKind k, Expr a, Expr b) {
  ExprNode n;
  n.kind = k;
  n.a = std::move(a);
  n.b = std::move(b);
  return node(std::move(n));
}

Expr make_neg(Expr a) {
  ExprNode n;
  n.kind = ExprKind::Neg;
  n.a = std::move(a);
  return node(std::move(n));
}

Expr make_pow(Expr a, int k) {
  ExprNode n;
  n.kind = ExprKind::Pow;
  n.a = std::move(a);
  n.exponent = k;
  return node(std::move(n));
}

Expr make_call(ExprFn f, Expr a) {
  ExprNode n;
  n.kind = ExprKind::Call;
  n.fn = f;
  n.a = std::move(a);
  return node(std::move(n));
}

const char* fn_name(ExprFn f) {
  switch (f) {
    case ExprFn::Sin: return "sin";
    case ExprFn::Cos: return "cos";
    case ExprFn::Exp: return "exp";
    case ExprFn::Log: return "log";
    case ExprFn::Sqrt: return "sqrt";
  }
  return "?";
}

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
  const ExprNode& n = *e;
  const int prec = precedence(n);
  const bool parens = prec < parent_prec;
  if (parens) os << '(';
  switch (n.kind) {
    case ExprKind::Const: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << n.value;
      os << tmp.str();
      break;
    }
    case ExprKind::Var:
      os << 'x' << (n.var + 1);
      break;
    case ExprKind::Add:
      print_expr(os, n.a, prec);
      os << " + ";
      print_expr(os, n.b, prec + 1);
      break;
    case ExprKind::Sub:
      print_expr(os, n.a, prec);
      os << " - ";
      print_expr(os, n.b, prec + 1);
      break;
    case ExprKind::Mul:
      print_expr(os, n.a, prec);
      os << "*";
      print_expr(os, n.b, prec + 1);
      break;
    case ExprKind::Div:
      print_expr(os, n.a, prec);
      os << "/";
      print_expr(os, n.b, prec + 1);
      break;
    case ExprKind::Neg:
      os << '-';
      print_expr(os, n.a, prec);
      break;
    case ExprKind::Pow:
      print_expr(os, n.a, prec + 1);
      os << '^' << n.exponent;
      break;
    case ExprKind::Call:
      os << fn_name(n.fn) << '(';
      print_expr(os, n.a, 0);
      os << ')';
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const: return a->value == b->value;
    case ExprKind::Var: return a->var == b->var;
    case ExprKind::Pow: return a->exponent == b->exponent && expr_equal(a->a, b->a);
    case ExprKind::Neg: return expr_equal(a->a, b->a);
    case ExprKind::Call: return a->fn == b->fn && expr_equal(a->a, b->a);
    default: return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

double eval_expr(const Expr& e, const Vec& w) {
  const ExprNode& n = *e;
  switch (n.kind) {
    case ExprKind::Const: return n.value;
    case ExprKind::Var: return w[n.var];
    case ExprKind::Add: return eval_expr(n.a, w) + eval_expr(n.b, w);
    case ExprKind::Sub: return eval_expr(n.a, w) - eval_expr(n.b, w);
    case ExprKind::Mul: return eval_expr(n.a, w) * eval_expr(n.b, w);
    case ExprKind::Div: {
      const double den = eval_expr(n.b, w);
      if (den == 0.0) throw DomainError("division by zero", to_string(e));
      return eval_expr(n.a, w) / den;
    }
    case ExprKind::Neg: return -eval_expr(n.a, w);
    case ExprKind::Pow: {
      const double base = eval_expr(n.a, w);
      if (n.exponent < 0 && base == 0.0) {
        throw DomainError("zero raised to a negative power", to_string(e));
      }
      double acc = 1.0;
      const int m = n.exponent < 0 ? -n.exponent : n.exponent;
      for (int i = 0; i < m; ++i) acc *= base;
      return n.exponent < 0 ? 1.0 / acc : acc;
    }
    case ExprKind::Call: {
      const double x = eval_expr(n.a, w);
      switch (n.fn) {
        case ExprFn::Sin: return std::sin(x);
        case ExprFn::Cos: return std::cos(x);
        case ExprFn::Exp: return std::exp(x);
        case ExprFn::Log:
          if (x <= 0.0) throw DomainError("log of a non-positive value", to_string(e));
          return std::log(x);
        case ExprFn::Sqrt:
          if (x < 0.0) throw DomainError("sqrt of a negative value", to_string(e));
          return std::sqrt(x);
      }
      return 0.0;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Lexer / recursive-descent parser for the field DSL.

namespace {

enum class Tok {
  End, Number, Ident, Plus, Minus, Star, Slash, Caret,
  LParen, RParen, LBracket, RBracket, Equals, Semicolon, Comma, Newline
};

struct Token {
  Tok kind;
  double number = 0.0;
  std::string text;
  int line = 1;
  int col = 1;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Equals: return "'='";
    case Tok::Semicolon: return "';'";
    case Tok::Comma: return "','";
    case Tok::Newline: return "newline";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_blanks();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char ch = src_[pos_];
    if (ch == '\n') {
      advance();
      t.kind = Tok::Newline;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      t.number = std::strtod(begin, &end);
      if (end == begin) {
        throw ParseError(line_, col_, "number", std::string(1, ch));
      }
      for (const char* p = begin; p != end; ++p) advance();
      t.kind = Tok::Number;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        id += src_[pos_];
        advance();
      }
      t.kind = Tok::Ident;
      t.text = id;
      return t;
    }
    advance();
    switch (ch) {
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '^': t.kind = Tok::Caret; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case '=': t.kind = Tok::Equals; return t;
      case ';': t.kind = Tok::Semicolon; return t;
      case ',': t.kind = Tok::Comma; return t;
      default:
        throw ParseError(t.line, t.col, "a token", std::string(1, ch));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blanks() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (ch == ' ' || ch == '\t' || ch == '\r') {
        advance();
      } else {
        return;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& src, int dim) : lex_(src), dim_(dim) { bump(); }

  // component index (0-based) -> expression; or polynomial coefficient tuples
  std::map<int, Expr> bindings;
  std::vector<std::vector<double>> poly_coeffs;
  bool has_poly = false;

  void parse_program() {
    skip_separators();
    while (cur_.kind != Tok::End) {
      parse_binding();
      if (cur_.kind != Tok::End && cur_.kind != Tok::Semicolon &&
          cur_.kind != Tok::Newline) {
        fail("';' or newline");
      }
      skip_separators();
    }
  }

 private:
  void bump() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& expected) {
    std::string got = cur_.kind == Tok::Ident ? "'" + cur_.text + "'" : tok_name(cur_.kind);
    throw ParseError(cur_.line, cur_.col, expected, got);
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) fail(what);
    bump();
  }

  void skip_separators() {
    while (cur_.kind == Tok::Semicolon || cur_.kind == Tok::Newline) bump();
  }

  void parse_binding() {
    if (cur_.kind != Tok::Ident) fail("component binding like 'f1 = ...'");
    const std::string name = cur_.text;
    if (name == "poly") {
      bump();
      expect(Tok::Equals, "'='");
      parse_poly_list();
      has_poly = true;
      return;
    }
    int idx = component_index(name);
    bump();
    expect(Tok::Equals, "'='");
    Expr e = parse_expr();
    if (bindings.count(idx)) {
      throw ArityError("component f" + std::to_string(idx + 1) + " bound twice");
    }
    bindings[idx] = std::move(e);
  }

  int component_index(const std::string& name) {
    if (name.size() >= 2 && name[0] == 'f') {
      const int i = std::atoi(name.c_str() + 1);
      if (i >= 1 && i <= dim_) return i - 1;
      if (i >= 1) {
        throw ArityError("component " + name + " exceeds field dimension " +
                         std::to_string(dim_));
      }
    }
    fail("component name f1..f" + std::to_string(dim_));
  }

  void parse_poly_list() {
    expect(Tok::LBracket, "'['");
    for (;;) {
      poly_coeffs.push_back(parse_tuple());
      if (cur_.kind == Tok::Semicolon) {
        bump();
        continue;
      }
      break;
    }
    expect(Tok::RBracket, "']'");
  }

  std::vector<double> parse_tuple() {
    std::vector<double> vals;
    vals.push_back(parse_signed_number());
    while (cur_.kind == Tok::Comma) {
      bump();
      vals.push_back(parse_signed_number());
    }
    return vals;
  }

  double parse_signed_number() {
    double sign = 1.0;
    while (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
      if (cur_.kind == Tok::Minus) sign = -sign;
      bump();
    }
    if (cur_.kind != Tok::Number) fail("number");
    const double v = sign * cur_.number;
    bump();
    return v;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const bool add = cur_.kind == Tok::Plus;
      bump();
      Expr rhs = parse_term();
      e = make_binary(add ? ExprKind::Add : ExprKind::Sub, std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const bool mul = cur_.kind == Tok::Star;
      bump();
      Expr rhs = parse_factor();
      e = make_binary(mul ? ExprKind::Mul : ExprKind::Div, std::move(e), std::move(rhs));
    }
    return e;
  }

  Expr parse_factor() {
    if (cur_.kind == Tok::Minus) {
      bump();
      return make_neg(parse_factor());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (cur_.kind == Tok::Caret) {
      bump();
      int sign = 1;
      if (cur_.kind == Tok::Minus) {
        sign = -1;
        bump();
      }
      if (cur_.kind != Tok::Number) fail("integer exponent");
      const double v = cur_.number;
      const int k = static_cast<int>(v);
      if (static_cast<double>(k) != v) fail("integer exponent");
      bump();
      if (cur_.kind == Tok::Caret) fail("no further '^' (chained exponents are ambiguous)");
      return make_pow(std::move(base), sign * k);
    }
    return base;
  }

  Expr parse_atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        Expr e = make_const(cur_.number);
        bump();
        return e;
      }
      case Tok::LParen: {
        bump();
        Expr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        const std::string name = cur_.text;
        if (name.size() >= 2 && name[0] == 'x') {
          const int i = std::atoi(name.c_str() + 1);
          if (i >= 1 && i <= dim_) {
            bump();
            return make_var(i - 1);
          }
          fail("variable x1..x" + std::to_string(dim_));
        }
        ExprFn fn;
        if (name == "sin") fn = ExprFn::Sin;
        else if (name == "cos") fn = ExprFn::Cos;
        else if (name == "exp") fn = ExprFn::Exp;
        else if (name == "log") fn = ExprFn::Log;
        else if (name == "sqrt") fn = ExprFn::Sqrt;
        else fail("variable or function name");
        bump();
        expect(Tok::LParen, "'('");
        Expr arg = parse_expr();
        expect(Tok::RParen, "')'");
        return make_call(fn, std::move(arg));
      }
      default:
        fail("number, variable, '(' or function call");
    }
  }

  Lexer lex_;
  Token cur_;
  int dim_;
};

}  // namespace

// ---------------------------------------------------------------------------
// FieldDef

FieldDef FieldDef::components(int dim, std::vector<Expr> comps) {
  if (static_cast<int>(comps.size()) != dim) {
    throw ArityError("field on R^" + std::to_string(dim) + " needs " +
                     std::to_string(dim) + " components, got " +
                     std::to_string(comps.size()));
  }
  FieldDef f;
  f.dim_ = dim;
  f.comps_ = std::move(comps);
  return f;
}

FieldDef FieldDef::polynomial(const AlgebraSpec& A, std::vector<Vec> coeffs) {
  if (coeffs.empty()) throw ArityError("polynomial field needs at least one coefficient");
  for (const Vec& a : coeffs) {
    if (a.size() != A.dim()) {
      throw DimensionMismatch("polynomial coefficient has wrong dimension");
    }
  }
  FieldDef f;
  f.dim_ = A.dim();
  f.alg_ = std::make_shared<AlgebraSpec>(A);
  f.coeffs_ = std::move(coeffs);
  return f;
}

const AlgebraSpec& FieldDef::coefficient_algebra() const {
  if (!alg_) throw UnsupportedAlgebra("field has no coefficient algebra");
  return *alg_;
}

Vec FieldDef::eval(const Vec& w) const {
  if (w.size() != dim_) throw DimensionMismatch("point has wrong dimension");
  if (is_polynomial()) {
    Vec acc = coeffs_.back();
    for (int k = static_cast<int>(coeffs_.size()) - 2; k >= 0; --k) {
      acc = product(acc, w, *alg_) + coeffs_[k];
    }
    return acc;
  }
  Vec out(dim_);
  for (int i = 0; i < dim_; ++i) {
    out[i] = eval_expr(comps_[i], w);
    if (!std::isfinite(out[i])) {
      throw DomainError("non-finite value", to_string(comps_[i]));
    }
  }
  return out;
}

Mat FieldDef::jacobian(const Vec& w) const {
  if (exact_jacobian()) {
    // F'(w) = sum k a_k w^(k-1), evaluated by Horner; J = R(F'(w)).
    const int m = static_cast<int>(coeffs_.size()) - 1;
    if (m < 1) return Mat::Zero(dim_, dim_);
    Vec acc = static_cast<double>(m) * coeffs_[m];
    for (int k = m - 1; k >= 1; --k) {
      acc = product(acc, w, *alg_) + static_cast<double>(k) * coeffs_[k];
    }
    return representation(acc, *alg_);
  }
  return fd_jacobian(fn(), w);
}

FieldDef FieldDef::with_fd_jacobian() const {
  FieldDef f = *this;
  f.force_fd_ = true;
  return f;
}

FieldFn FieldDef::fn() const {
  FieldDef copy = *this;
  return [copy](const Vec& w) { return copy.eval(w); };
}

FieldDef parse_field(const std::string& text, int dim, const AlgebraSpec* poly_algebra) {
  Parser p(text, dim);
  p.parse_program();
  if (p.has_poly) {
    if (!p.bindings.empty()) {
      throw ArityError("field mixes component bindings with a polynomial form");
    }
    if (poly_algebra == nullptr) {
      throw UnsupportedAlgebra("polynomial field form requires an algebra");
    }
    std::vector<Vec> coeffs;
    for (const auto& tuple : p.poly_coeffs) {
      if (static_cast<int>(tuple.size()) != dim) {
        throw ArityError("polynomial coefficient tuple has " +
                         std::to_string(tuple.size()) + " entries, expected " +
                         std::to_string(dim));
      }
      Vec a(dim);
      for (int i = 0; i < dim; ++i) a[i] = tuple[i];
      coeffs.push_back(std::move(a));
    }
    return FieldDef::polynomial(*poly_algebra, std::move(coeffs));
  }
  std::vector<Expr> comps;
  for (int i = 0; i < dim; ++i) {
    auto it = p.bindings.find(i);
    if (it == p.bindings.end()) {
      throw ArityError("missing component f" + std::to_string(i + 1));
    }
    comps.push_back(it->second);
  }
  return FieldDef::components(dim, std::move(comps));
}

Mat fd_jacobian(const FieldFn& f, const Vec& w, double step_scale) {
  const int n = static_cast<int>(w.size());
  Mat J(f(w).size(), n);
  Vec wp = w, wm = w;
  for (int j = 0; j < n; ++j) {
    const double h = step_scale * std::max(1.0, std::abs(w[j]));
    wp[j] = w[j] + h;
    wm[j] = w[j] - h;
    const Vec fp = f(wp);
    const Vec fm = f(wm);
    J.col(j) = (fp - fm) / (2.0 * h);
    wp[j] = w[j];
    wm[j] = w[j];
  }
  return J;
}

Vec fd_gradient(const ScalarFn& f, const Vec& w, double step_scale) {
  const int n = static_cast<int>(w.size());
  Vec g(n);
  Vec wp = w, wm = w;
  for (int j = 0; j < n; ++j) {
    const double h = step_scale * std::max(1.0, std::abs(w[j]));
    wp[j] = w[j] + h;
    wm[j] = w[j] - h;
    g[j] = (f(wp) - f(wm)) / (2.0 * h);
    wp[j] = w[j];
    wm[j] = w[j];
  }
  return g;
}

}  // namespace lorch
