#include "weyl/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "weyl/error.hpp"
#include "weyl/real_math.hpp"

namespace weyl {

struct ScalarExpr::Node {
  enum class Kind {
    Number,
    Coord,
    Param,
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // a ^ number (exponent folded at construction)
  };

  Kind kind;
  double number = 0.0;  // Number value, or Pow exponent
  int index = -1;       // Coord / Param index
  NodePtr a, b;
};

namespace {

using Node = ScalarExpr::Node;
using Kind = Node::Kind;
using NodePtr = ScalarExpr::NodePtr;

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = v;
  return n;
}

NodePtr make_leaf(Kind k, int index) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->index = index;
  return n;
}

NodePtr make_unary(Kind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_pow(NodePtr base, double expo) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->number = expo;
  n->a = std::move(base);
  return n;
}

bool is_number(const NodePtr& n, double v) {
  return n->kind == Kind::Number && n->number == v;
}

// ---------------------------------------------------------------------------
// Evaluation. One templated walk serves plain doubles and Jet2: the Jet2
// value channel performs the identical double operation at every node, so
// the two paths agree bit for bit.
// ---------------------------------------------------------------------------

double d_div(double a, double b) {
  if (b == 0.0) throw EvalDomainError("division by zero");
  return a / b;
}
double d_log(double x) {
  if (!(x > 0.0)) throw EvalDomainError("log of non-positive value");
  return std::log(x);
}
double d_sqrt(double x) {
  if (x < 0.0) throw EvalDomainError("sqrt of negative value");
  return std::sqrt(x);
}
double d_pow(double base, double c) {
  const bool integral = (c == std::floor(c)) && std::abs(c) < 1e15;
  if (!integral && !(base > 0.0))
    throw EvalDomainError("fractional power of non-positive base");
  if (integral && c < 0.0 && base == 0.0)
    throw EvalDomainError("negative power of zero");
  return std::pow(base, c);
}

struct DoubleCtx {
  const Point& pt;
  const Vec& param_values;
  double number(double v) const { return v; }
  double coord(int i) const { return pt[i]; }
  double param(int i) const { return param_values[i]; }
  static double neg(double x) { return -x; }
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) { return d_div(a, b); }
  static double sin_(double x) { return detail::r_sin(x); }
  static double cos_(double x) { return detail::r_cos(x); }
  static double exp_(double x) { return std::exp(x); }
  static double log_(double x) { return d_log(x); }
  static double sqrt_(double x) { return d_sqrt(x); }
  static double pow_(double x, double c) { return d_pow(x, c); }
};

template <class J>
struct JetCtx {
  const Point& pt;
  const Vec& param_values;
  int n;
  J number(double v) const { return J::constant(v, n); }
  J coord(int i) const { return J::variable(pt[i], n, i); }
  J param(int i) const { return J::constant(param_values[i], n); }
  static J neg(const J& x) { return -x; }
  static J add(const J& a, const J& b) { return a + b; }
  static J sub(const J& a, const J& b) { return a - b; }
  static J mul(const J& a, const J& b) { return a * b; }
  static J div(const J& a, const J& b) { return a / b; }
  static J sin_(const J& x) { return sin(x); }
  static J cos_(const J& x) { return cos(x); }
  static J exp_(const J& x) { return exp(x); }
  static J log_(const J& x) { return log(x); }
  static J sqrt_(const J& x) { return sqrt(x); }
  static J pow_(const J& x, double c) { return pow(x, c); }
};

template <class Ctx>
auto eval_node(const Node& nd, const Ctx& ctx)
    -> decltype(ctx.number(0.0)) {
  switch (nd.kind) {
    case Kind::Number:
      return ctx.number(nd.number);
    case Kind::Coord:
      return ctx.coord(nd.index);
    case Kind::Param:
      return ctx.param(nd.index);
    case Kind::Neg:
      return Ctx::neg(eval_node(*nd.a, ctx));
    case Kind::Sin:
      return Ctx::sin_(eval_node(*nd.a, ctx));
    case Kind::Cos:
      return Ctx::cos_(eval_node(*nd.a, ctx));
    case Kind::Exp:
      return Ctx::exp_(eval_node(*nd.a, ctx));
    case Kind::Log:
      return Ctx::log_(eval_node(*nd.a, ctx));
    case Kind::Sqrt:
      return Ctx::sqrt_(eval_node(*nd.a, ctx));
    case Kind::Add:
      return Ctx::add(eval_node(*nd.a, ctx), eval_node(*nd.b, ctx));
    case Kind::Sub:
      return Ctx::sub(eval_node(*nd.a, ctx), eval_node(*nd.b, ctx));
    case Kind::Mul:
      return Ctx::mul(eval_node(*nd.a, ctx), eval_node(*nd.b, ctx));
    case Kind::Div:
      return Ctx::div(eval_node(*nd.a, ctx), eval_node(*nd.b, ctx));
    case Kind::Pow:
      return Ctx::pow_(eval_node(*nd.a, ctx), nd.number);
  }
  throw Error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  Tok tok = Tok::End;
  std::size_t tok_pos = 0;
  double number = 0.0;
  std::string ident;

  explicit Lexer(std::string_view t) : text(t) { next(); }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void next() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    tok_pos = pos;
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    const char c = text[pos];
    switch (c) {
      case '+': tok = Tok::Plus; ++pos; return;
      case '-': tok = Tok::Minus; ++pos; return;
      case '*': tok = Tok::Star; ++pos; return;
      case '/': tok = Tok::Slash; ++pos; return;
      case '^': tok = Tok::Caret; ++pos; return;
      case '(': tok = Tok::LParen; ++pos; return;
      case ')': tok = Tok::RParen; ++pos; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
      const char* begin = text.data() + pos;
      const char* end = text.data() + text.size();
      double v = 0.0;
      auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc{}) fail("malformed number", pos);
      pos += static_cast<std::size_t>(res.ptr - begin);
      tok = Tok::Number;
      number = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_'))
        ++pos;
      tok = Tok::Ident;
      ident.assign(text.substr(start, pos - start));
      return;
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }
};

const std::set<std::string, std::less<>> kFunctions = {"sin", "cos", "exp",
                                                       "log", "sqrt"};

struct Parser {
  Lexer lex;
  const Symbols& symbols;

  Parser(std::string_view text, const Symbols& syms)
      : lex(text), symbols(syms) {}

  NodePtr parse() {
    NodePtr e = expr();
    if (lex.tok != Tok::End)
      lex.fail("unexpected trailing input", lex.tok_pos);
    return e;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (lex.tok == Tok::Plus || lex.tok == Tok::Minus) {
      const Kind k = lex.tok == Tok::Plus ? Kind::Add : Kind::Sub;
      lex.next();
      lhs = make_binary(k, std::move(lhs), term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (lex.tok == Tok::Star || lex.tok == Tok::Slash) {
      const Kind k = lex.tok == Tok::Star ? Kind::Mul : Kind::Div;
      lex.next();
      lhs = make_binary(k, std::move(lhs), factor());
    }
    return lhs;
  }

  // Unary minus sits between '*' and '^': -x^2 means -(x^2), -x*y means
  // (-x)*y.
  NodePtr factor() {
    if (lex.tok == Tok::Minus) {
      lex.next();
      return negate(factor());
    }
    return power();
  }

  NodePtr power() {
    NodePtr b = base();
    if (lex.tok == Tok::Caret) {
      const std::size_t at = lex.tok_pos;
      lex.next();
      NodePtr e = base();
      return make_pow(std::move(b), fold_exponent(*e, at));
    }
    return b;
  }

  NodePtr base() {
    switch (lex.tok) {
      case Tok::Number: {
        NodePtr n = make_num(lex.number);
        lex.next();
        return n;
      }
      case Tok::Minus: {
        lex.next();
        return negate(base());
      }
      case Tok::LParen: {
        const std::size_t at = lex.tok_pos;
        lex.next();
        NodePtr e = expr();
        if (lex.tok != Tok::RParen)
          lex.fail("missing ')' for '(' ", at);
        lex.next();
        return e;
      }
      case Tok::Ident: {
        const std::string name = lex.ident;
        const std::size_t at = lex.tok_pos;
        lex.next();
        if (lex.tok == Tok::LParen) {
          auto fn = kFunctions.find(name);
          if (fn == kFunctions.end())
            lex.fail("unknown function '" + name + "'", at);
          lex.next();
          NodePtr arg = expr();
          if (lex.tok != Tok::RParen)
            lex.fail("missing ')' in call of '" + name + "'", at);
          lex.next();
          if (name == "sin") return make_unary(Kind::Sin, std::move(arg));
          if (name == "cos") return make_unary(Kind::Cos, std::move(arg));
          if (name == "exp") return make_unary(Kind::Exp, std::move(arg));
          if (name == "log") return make_unary(Kind::Log, std::move(arg));
          return make_unary(Kind::Sqrt, std::move(arg));
        }
        if (kFunctions.count(name))
          lex.fail("expected '(' after function '" + name + "'", at);
        if (int ci = symbols.coord_index(name); ci >= 0)
          return make_leaf(Kind::Coord, ci);
        if (int pi = symbols.param_index(name); pi >= 0)
          return make_leaf(Kind::Param, pi);
        lex.fail("unknown identifier '" + name + "'", at);
      }
      default:
        lex.fail("expected a number, name, or '('", lex.tok_pos);
    }
  }

  // Literal negations fold so that "-2" is the literal -2.
  static NodePtr negate(NodePtr n) {
    if (n->kind == Kind::Number) return make_num(-n->number);
    return make_unary(Kind::Neg, std::move(n));
  }

  static bool contains_symbol(const Node& n) {
    if (n.kind == Kind::Coord || n.kind == Kind::Param) return true;
    return (n.a && contains_symbol(*n.a)) || (n.b && contains_symbol(*n.b));
  }

  double fold_exponent(const Node& n, std::size_t at) const {
    if (contains_symbol(n))
      lex.fail("exponent must be a numeric constant", at);
    // Parenthesized arithmetic over literals is accepted and folded.
    try {
      Point none(0);
      Vec noparams(0);
      return eval_node(n, DoubleCtx{none, noparams});
    } catch (const EvalDomainError& e) {
      lex.fail(std::string("bad constant exponent: ") + e.what(), at);
    }
  }
};

// ---------------------------------------------------------------------------
// Printer. Minimal parentheses that still reproduce the tree exactly on
// re-parse; printing is idempotent.
// ---------------------------------------------------------------------------

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Bindings / Symbols
// ---------------------------------------------------------------------------

double Bindings::at(const std::string& name) const {
  auto v = find(name);
  if (!v) throw Error("parameter '" + name + "' is not bound");
  return *v;
}

Vec Bindings::resolve(const std::vector<std::string>& params) const {
  Vec out(static_cast<Eigen::Index>(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = at(params[i]);
  return out;
}

namespace {
void check_name(const std::string& name) {
  if (name.empty()) throw ParseError("empty symbol name");
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    throw ParseError("symbol name '" + name + "' must start with a letter");
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      throw ParseError("symbol name '" + name + "' has invalid characters");
  if (kFunctions.count(name))
    throw ParseError("symbol name '" + name + "' shadows a function");
}
}  // namespace

SymbolsPtr Symbols::make(std::vector<std::string> coords,
                         std::vector<std::string> params) {
  std::set<std::string> seen;
  for (const auto& list : {coords, params})
    for (const auto& name : list) {
      check_name(name);
      if (!seen.insert(name).second)
        throw ParseError("duplicate symbol name '" + name + "'");
    }
  auto s = std::make_shared<Symbols>();
  s->coords = std::move(coords);
  s->params = std::move(params);
  return s;
}

int Symbols::coord_index(std::string_view name) const {
  auto it = std::find(coords.begin(), coords.end(), name);
  return it == coords.end() ? -1 : static_cast<int>(it - coords.begin());
}

int Symbols::param_index(std::string_view name) const {
  auto it = std::find(params.begin(), params.end(), name);
  return it == params.end() ? -1 : static_cast<int>(it - params.begin());
}

// ---------------------------------------------------------------------------
// ScalarExpr
// ---------------------------------------------------------------------------

ScalarExpr ScalarExpr::parse(std::string_view text, SymbolsPtr symbols) {
  Parser p(text, *symbols);
  return ScalarExpr(p.parse(), std::move(symbols));
}

ScalarExpr ScalarExpr::parse(std::string_view text,
                             std::vector<std::string> coords,
                             std::vector<std::string> params) {
  return parse(text, Symbols::make(std::move(coords), std::move(params)));
}

namespace {
void print_resolved(const Node& n, const Symbols& syms, std::string& out);

void print_resolved_child(const Node& child, int min_prec, const Symbols& syms,
                          std::string& out) {
  const bool parens = precedence(child) < min_prec;
  if (parens) out += '(';
  print_resolved(child, syms, out);
  if (parens) out += ')';
}

void print_resolved(const Node& n, const Symbols& syms, std::string& out) {
  switch (n.kind) {
    case Kind::Coord:
      out += syms.coords[static_cast<std::size_t>(n.index)];
      return;
    case Kind::Param:
      out += syms.params[static_cast<std::size_t>(n.index)];
      return;
    case Kind::Neg:
      out += '-';
      print_resolved_child(*n.a, 3, syms, out);
      return;
    case Kind::Sin:
    case Kind::Cos:
    case Kind::Exp:
    case Kind::Log:
    case Kind::Sqrt: {
      const char* name = n.kind == Kind::Sin   ? "sin"
                         : n.kind == Kind::Cos ? "cos"
                         : n.kind == Kind::Exp ? "exp"
                         : n.kind == Kind::Log ? "log"
                                               : "sqrt";
      out += name;
      out += '(';
      print_resolved(*n.a, syms, out);
      out += ')';
      return;
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(n);
      print_resolved_child(*n.a, p, syms, out);
      out += n.kind == Kind::Add   ? '+'
             : n.kind == Kind::Sub ? '-'
             : n.kind == Kind::Mul ? '*'
                                   : '/';
      print_resolved_child(*n.b, p + 1, syms, out);
      return;
    }
    case Kind::Number:
      out += format_double(n.number);
      return;
    case Kind::Pow: {
      const bool neg_literal =
          n.a->kind == Kind::Number && std::signbit(n.a->number);
      print_resolved_child(*n.a, neg_literal ? 6 : 5, syms, out);
      out += '^';
      out += format_double(n.number);
      return;
    }
  }
}
}  // namespace

std::string ScalarExpr::print() const {
  if (!root_) return "";
  std::string out;
  print_resolved(*root_, *symbols_, out);
  return out;
}

double ScalarExpr::eval(const Point& pt, const Bindings& binds) const {
  if (!root_) throw Error("evaluating an empty expression");
  if (pt.size() != static_cast<Eigen::Index>(symbols_->coords.size()))
    throw Error("point dimension does not match declared coordinates");
  const Vec pv = binds.resolve(symbols_->params);
  return eval_node(*root_, DoubleCtx{pt, pv});
}

Jet1 ScalarExpr::eval_jet1(const Point& pt, const Bindings& binds) const {
  if (!root_) throw Error("evaluating an empty expression");
  if (pt.size() != static_cast<Eigen::Index>(symbols_->coords.size()))
    throw Error("point dimension does not match declared coordinates");
  const Vec pv = binds.resolve(symbols_->params);
  return eval_node(*root_, JetCtx<Jet1>{pt, pv, dim()});
}

Jet2 ScalarExpr::eval_jet2(const Point& pt, const Bindings& binds) const {
  if (!root_) throw Error("evaluating an empty expression");
  if (pt.size() != static_cast<Eigen::Index>(symbols_->coords.size()))
    throw Error("point dimension does not match declared coordinates");
  const Vec pv = binds.resolve(symbols_->params);
  return eval_node(*root_, JetCtx<Jet2>{pt, pv, dim()});
}

namespace {
bool depends_on(const Node& n, int coord) {
  switch (n.kind) {
    case Kind::Coord:
      return n.index == coord;
    case Kind::Number:
    case Kind::Param:
      return false;
    default:
      return (n.a && depends_on(*n.a, coord)) ||
             (n.b && depends_on(*n.b, coord));
  }
}

// Smart constructors used by derivative(): fold literals and drop exact
// identities (0+x, 1*x, x^1, ...). These folds are value-exact in IEEE
// arithmetic for finite operands.
NodePtr s_neg(NodePtr a) {
  if (a->kind == Kind::Number) return make_num(-a->number);
  if (a->kind == Kind::Neg) return a->a;
  return make_unary(Kind::Neg, std::move(a));
}
NodePtr s_add(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (a->kind == Kind::Number && b->kind == Kind::Number)
    return make_num(a->number + b->number);
  return make_binary(Kind::Add, std::move(a), std::move(b));
}
NodePtr s_sub(NodePtr a, NodePtr b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return s_neg(std::move(b));
  if (a->kind == Kind::Number && b->kind == Kind::Number)
    return make_num(a->number - b->number);
  return make_binary(Kind::Sub, std::move(a), std::move(b));
}
NodePtr s_mul(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return make_num(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (a->kind == Kind::Number && b->kind == Kind::Number)
    return make_num(a->number * b->number);
  return make_binary(Kind::Mul, std::move(a), std::move(b));
}
NodePtr s_div(NodePtr a, NodePtr b) {
  if (is_number(a, 0.0)) return make_num(0.0);
  if (is_number(b, 1.0)) return a;
  return make_binary(Kind::Div, std::move(a), std::move(b));
}
NodePtr s_pow(NodePtr a, double c) {
  if (c == 1.0) return a;
  if (c == 0.0) return make_num(1.0);
  if (a->kind == Kind::Number) return make_num(std::pow(a->number, c));
  return make_pow(std::move(a), c);
}

NodePtr diff(const Node& n, int coord) {
  switch (n.kind) {
    case Kind::Number:
    case Kind::Param:
      return make_num(0.0);
    case Kind::Coord:
      return make_num(n.index == coord ? 1.0 : 0.0);
    case Kind::Neg:
      return s_neg(diff(*n.a, coord));
    case Kind::Add:
      return s_add(diff(*n.a, coord), diff(*n.b, coord));
    case Kind::Sub:
      return s_sub(diff(*n.a, coord), diff(*n.b, coord));
    case Kind::Mul:
      return s_add(s_mul(diff(*n.a, coord), n.b),
                   s_mul(n.a, diff(*n.b, coord)));
    case Kind::Div:
      // (u/v)' = (u'v - uv')/v^2
      return s_div(s_sub(s_mul(diff(*n.a, coord), n.b),
                         s_mul(n.a, diff(*n.b, coord))),
                   s_pow(n.b, 2.0));
    case Kind::Sin:
      return s_mul(make_unary(Kind::Cos, n.a), diff(*n.a, coord));
    case Kind::Cos:
      return s_neg(s_mul(make_unary(Kind::Sin, n.a), diff(*n.a, coord)));
    case Kind::Exp:
      return s_mul(make_unary(Kind::Exp, n.a), diff(*n.a, coord));
    case Kind::Log:
      return s_div(diff(*n.a, coord), n.a);
    case Kind::Sqrt:
      return s_div(diff(*n.a, coord),
                   s_mul(make_num(2.0), make_unary(Kind::Sqrt, n.a)));
    case Kind::Pow:
      // (u^c)' = c u^(c-1) u'
      return s_mul(s_mul(make_num(n.number), s_pow(n.a, n.number - 1.0)),
                   diff(*n.a, coord));
  }
  throw Error("corrupt expression node");
}
}  // namespace

bool ScalarExpr::depends_on_coord(int coord) const {
  return root_ && depends_on(*root_, coord);
}

ScalarExpr ScalarExpr::derivative(int coord) const {
  if (!root_) throw Error("differentiating an empty expression");
  if (coord < 0 || coord >= dim()) throw Error("coordinate index out of range");
  return ScalarExpr(diff(*root_, coord), symbols_);
}

namespace {
void require_same_symbols(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.symbols() == b.symbols()) return;
  if (a.symbols() && b.symbols() && *a.symbols() == *b.symbols()) return;
  throw Error("combining expressions over different symbol tables");
}
}  // namespace

ScalarExpr ScalarExpr::number(double v, SymbolsPtr symbols) {
  return ScalarExpr(make_num(v), std::move(symbols));
}
ScalarExpr ScalarExpr::coordinate(int i, SymbolsPtr symbols) {
  if (i < 0 || i >= static_cast<int>(symbols->coords.size()))
    throw Error("coordinate index out of range");
  return ScalarExpr(make_leaf(Kind::Coord, i), std::move(symbols));
}
ScalarExpr ScalarExpr::parameter(int i, SymbolsPtr symbols) {
  if (i < 0 || i >= static_cast<int>(symbols->params.size()))
    throw Error("parameter index out of range");
  return ScalarExpr(make_leaf(Kind::Param, i), std::move(symbols));
}

ScalarExpr operator-(const ScalarExpr& a) {
  return ScalarExpr(s_neg(a.root_), a.symbols_);
}
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_symbols(a, b);
  return ScalarExpr(s_add(a.root_, b.root_), a.symbols_);
}
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_symbols(a, b);
  return ScalarExpr(s_sub(a.root_, b.root_), a.symbols_);
}
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_symbols(a, b);
  return ScalarExpr(s_mul(a.root_, b.root_), a.symbols_);
}
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  require_same_symbols(a, b);
  return ScalarExpr(s_div(a.root_, b.root_), a.symbols_);
}
ScalarExpr pow(const ScalarExpr& a, double expo) {
  return ScalarExpr(s_pow(a.root_, expo), a.symbols_);
}
ScalarExpr sin(const ScalarExpr& a) {
  return ScalarExpr(make_unary(Kind::Sin, a.root_), a.symbols_);
}
ScalarExpr cos(const ScalarExpr& a) {
  return ScalarExpr(make_unary(Kind::Cos, a.root_), a.symbols_);
}
ScalarExpr exp(const ScalarExpr& a) {
  return ScalarExpr(make_unary(Kind::Exp, a.root_), a.symbols_);
}
ScalarExpr log(const ScalarExpr& a) {
  return ScalarExpr(make_unary(Kind::Log, a.root_), a.symbols_);
}
ScalarExpr sqrt(const ScalarExpr& a) {
  return ScalarExpr(make_unary(Kind::Sqrt, a.root_), a.symbols_);
}

namespace {
bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number:
      return a.number == b.number;
    case Kind::Coord:
    case Kind::Param:
      return a.index == b.index;
    case Kind::Pow:
      return a.number == b.number && nodes_equal(*a.a, *b.a);
    default:
      if ((a.a == nullptr) != (b.a == nullptr)) return false;
      if ((a.b == nullptr) != (b.b == nullptr)) return false;
      if (a.a && !nodes_equal(*a.a, *b.a)) return false;
      if (a.b && !nodes_equal(*a.b, *b.b)) return false;
      return true;
  }
}
}  // namespace

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
  if (!a.root_ || !b.root_) return a.root_ == b.root_;
  return nodes_equal(*a.root_, *b.root_);
}

}  // namespace weyl
