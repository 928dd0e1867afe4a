#include "bform/fields.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace bform {

namespace ast {

enum class Kind {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  neg,
  pow_int,
  fn_sin,
  fn_cos,
  fn_exp,
  fn_sqrt,
};

struct Node {
  Kind kind;
  double value = 0.0;  // constant
  int index = 0;       // variable index (1-based) or integer exponent
  NodePtr a, b;
};

namespace {

NodePtr node(Kind kind, double value, int index, NodePtr a = nullptr, NodePtr b = nullptr) {
  return std::make_shared<Node>(Node{kind, value, index, std::move(a), std::move(b)});
}

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::constant && n->value == v; }

double ipow(double base, int k) {
  if (k < 0) {
    base = 1.0 / base;
    k = -k;
  }
  double result = 1.0, p = base;
  while (k) {
    if (k & 1) result *= p;
    p *= p;
    k >>= 1;
  }
  return result;
}

NodePtr make_const(double v) { return node(Kind::constant, v, 0); }
NodePtr make_var(int i) { return node(Kind::variable, 0.0, i); }

NodePtr make_neg(NodePtr a) {
  if (a->kind == Kind::constant) return make_const(-a->value);
  if (a->kind == Kind::neg) return a->a;
  return node(Kind::neg, 0.0, 0, std::move(a));
}

NodePtr make_add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == Kind::constant && b->kind == Kind::constant)
    return make_const(a->value + b->value);
  return node(Kind::add, 0.0, 0, std::move(a), std::move(b));
}

NodePtr make_sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return make_neg(std::move(b));
  if (a->kind == Kind::constant && b->kind == Kind::constant)
    return make_const(a->value - b->value);
  return node(Kind::sub, 0.0, 0, std::move(a), std::move(b));
}

NodePtr make_mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::constant && b->kind == Kind::constant)
    return make_const(a->value * b->value);
  return node(Kind::mul, 0.0, 0, std::move(a), std::move(b));
}

NodePtr make_div(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) throw Error("division by a syntactically zero denominator");
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  if (a->kind == Kind::constant && b->kind == Kind::constant)
    return make_const(a->value / b->value);
  return node(Kind::div, 0.0, 0, std::move(a), std::move(b));
}

NodePtr make_pow(NodePtr a, int k) {
  if (k == 0) return make_const(1.0);
  if (k == 1) return a;
  if (a->kind == Kind::constant && !(a->value == 0.0 && k < 0))
    return make_const(ipow(a->value, k));
  return node(Kind::pow_int, 0.0, k, std::move(a));
}

NodePtr make_fn(Kind kind, NodePtr a) {
  if (a->kind == Kind::constant) {
    double v = 0.0;
    switch (kind) {
      case Kind::fn_sin: v = std::sin(a->value); break;
      case Kind::fn_cos: v = std::cos(a->value); break;
      case Kind::fn_exp: v = std::exp(a->value); break;
      case Kind::fn_sqrt: v = std::sqrt(a->value); break;
      default: break;
    }
    if (std::isfinite(v)) return make_const(v);
  }
  return node(kind, 0.0, 0, std::move(a));
}

double eval_node(const Node& n, const Vector& x) {
  switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::variable: return x(n.index - 1);
    case Kind::add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Kind::sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Kind::mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Kind::div: {
      const double num = eval_node(*n.a, x);
      const double den = eval_node(*n.b, x);
      if (den == 0.0) throw EvalDomainError("division by zero");
      return num / den;
    }
    case Kind::neg: return -eval_node(*n.a, x);
    case Kind::pow_int: {
      const double base = eval_node(*n.a, x);
      if (base == 0.0 && n.index < 0) throw EvalDomainError("zero raised to a negative power");
      return ipow(base, n.index);
    }
    case Kind::fn_sin: return std::sin(eval_node(*n.a, x));
    case Kind::fn_cos: return std::cos(eval_node(*n.a, x));
    case Kind::fn_exp: return std::exp(eval_node(*n.a, x));
    case Kind::fn_sqrt: {
      const double arg = eval_node(*n.a, x);
      if (arg < 0.0) throw EvalDomainError("sqrt of a negative argument");
      return std::sqrt(arg);
    }
  }
  throw Error("eval: corrupt expression node");
}

NodePtr diff_node(const NodePtr& n, int index) {
  switch (n->kind) {
    case Kind::constant: return make_const(0.0);
    case Kind::variable: return make_const(n->index == index ? 1.0 : 0.0);
    case Kind::add: return make_add(diff_node(n->a, index), diff_node(n->b, index));
    case Kind::sub: return make_sub(diff_node(n->a, index), diff_node(n->b, index));
    case Kind::mul:
      return make_add(make_mul(diff_node(n->a, index), n->b),
                      make_mul(n->a, diff_node(n->b, index)));
    case Kind::div:
      // (u/v)' = (u'v - uv') / v^2
      return make_div(make_sub(make_mul(diff_node(n->a, index), n->b),
                               make_mul(n->a, diff_node(n->b, index))),
                      make_pow(n->b, 2));
    case Kind::neg: return make_neg(diff_node(n->a, index));
    case Kind::pow_int:
      // (u^k)' = k u^{k-1} u'
      return make_mul(make_mul(make_const(static_cast<double>(n->index)), make_pow(n->a, n->index - 1)),
                      diff_node(n->a, index));
    case Kind::fn_sin: return make_mul(make_fn(Kind::fn_cos, n->a), diff_node(n->a, index));
    case Kind::fn_cos:
      return make_neg(make_mul(make_fn(Kind::fn_sin, n->a), diff_node(n->a, index)));
    case Kind::fn_exp: return make_mul(make_fn(Kind::fn_exp, n->a), diff_node(n->a, index));
    case Kind::fn_sqrt:
      // (sqrt u)' = u' / (2 sqrt u)
      return make_div(diff_node(n->a, index),
                      make_mul(make_const(2.0), make_fn(Kind::fn_sqrt, n->a)));
  }
  throw Error("differentiate: corrupt expression node");
}

NodePtr substitute(const NodePtr& n, const std::vector<NodePtr>& replacements) {
  switch (n->kind) {
    case Kind::constant: return n;
    case Kind::variable: return replacements[static_cast<std::size_t>(n->index - 1)];
    case Kind::add: return make_add(substitute(n->a, replacements), substitute(n->b, replacements));
    case Kind::sub: return make_sub(substitute(n->a, replacements), substitute(n->b, replacements));
    case Kind::mul: return make_mul(substitute(n->a, replacements), substitute(n->b, replacements));
    case Kind::div: return make_div(substitute(n->a, replacements), substitute(n->b, replacements));
    case Kind::neg: return make_neg(substitute(n->a, replacements));
    case Kind::pow_int: return make_pow(substitute(n->a, replacements), n->index);
    case Kind::fn_sin: return make_fn(Kind::fn_sin, substitute(n->a, replacements));
    case Kind::fn_cos: return make_fn(Kind::fn_cos, substitute(n->a, replacements));
    case Kind::fn_exp: return make_fn(Kind::fn_exp, substitute(n->a, replacements));
    case Kind::fn_sqrt: return make_fn(Kind::fn_sqrt, substitute(n->a, replacements));
  }
  throw Error("substitute: corrupt expression node");
}

int max_variable(const NodePtr& n) {
  switch (n->kind) {
    case Kind::constant: return 0;
    case Kind::variable: return n->index;
    case Kind::neg:
    case Kind::pow_int:
    case Kind::fn_sin:
    case Kind::fn_cos:
    case Kind::fn_exp:
    case Kind::fn_sqrt: return max_variable(n->a);
    default: return std::max(max_variable(n->a), max_variable(n->b));
  }
}

bool equal_nodes(const NodePtr& a, const NodePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->value != b->value || a->index != b->index) return false;
  if (bool(a->a) != bool(b->a) || bool(a->b) != bool(b->b)) return false;
  if (a->a && !equal_nodes(a->a, b->a)) return false;
  if (a->b && !equal_nodes(a->b, b->b)) return false;
  return true;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Printing precedence: add/sub = 1, mul/div = 2, neg = 3, pow = 4, atoms = 5.
int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow_int: return 4;
    case Kind::constant: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const NodePtr& n, std::ostream& out, int parent_prec) {
  const int prec = precedence(*n);
  const bool parens = prec < parent_prec;
  if (parens) out << '(';
  switch (n->kind) {
    case Kind::constant: out << format_double(n->value); break;
    case Kind::variable: out << 'x' << n->index; break;
    case Kind::add:
      print_node(n->a, out, 1);
      out << " + ";
      print_node(n->b, out, 2);
      break;
    case Kind::sub:
      print_node(n->a, out, 1);
      out << " - ";
      print_node(n->b, out, 2);
      break;
    case Kind::mul:
      print_node(n->a, out, 2);
      out << " * ";
      print_node(n->b, out, 3);
      break;
    case Kind::div:
      print_node(n->a, out, 2);
      out << " / ";
      print_node(n->b, out, 3);
      break;
    case Kind::neg:
      out << '-';
      print_node(n->a, out, 4);
      break;
    case Kind::pow_int:
      print_node(n->a, out, 5);
      out << '^' << n->index;
      break;
    case Kind::fn_sin:
    case Kind::fn_cos:
    case Kind::fn_exp:
    case Kind::fn_sqrt: {
      const char* name = n->kind == Kind::fn_sin   ? "sin"
                         : n->kind == Kind::fn_cos ? "cos"
                         : n->kind == Kind::fn_exp ? "exp"
                                                   : "sqrt";
      out << name << '(';
      print_node(n->a, out, 0);
      out << ')';
      break;
    }
  }
  if (parens) out << ')';
}

// Recursive-descent parser for the grammar documented in fields.hpp.
class Parser {
 public:
  Parser(std::string_view text, int nvars) : text_(text), nvars_(nvars) {}

  NodePtr run() {
    NodePtr result = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream msg;
    msg << "parse error at offset " << pos_ << ": " << what;
    throw ParseError(msg.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+')) lhs = make_add(std::move(lhs), parse_term());
      else if (eat('-')) lhs = make_sub(std::move(lhs), parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = make_mul(std::move(lhs), parse_unary());
      else if (eat('/')) {
        const std::size_t at = pos_;
        try {
          lhs = make_div(std::move(lhs), parse_unary());
        } catch (const Error& e) {
          pos_ = at;
          fail(e.what());
        }
      } else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make_neg(parse_unary());
    return parse_factor();
  }

  NodePtr parse_factor() {
    NodePtr base = parse_primary();
    if (eat('^')) return make_pow(std::move(base), parse_exponent());
    return base;
  }

  int parse_exponent() {
    skip_ws();
    const bool negative = eat('-');
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected an integer exponent after '^'");
    int value = 0;
    const auto result =
        std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (result.ec != std::errc{}) fail("invalid integer exponent");
    pos_ = static_cast<std::size_t>(result.ptr - text_.data());
    return negative ? -value : value;
  }

  NodePtr parse_primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    double value = 0.0;
    const auto result =
        std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (result.ec != std::errc{}) fail("invalid number");
    pos_ = static_cast<std::size_t>(result.ptr - text_.data());
    return make_const(value);
  }

  NodePtr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
      int index = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (index < 1 || index > nvars_) {
        pos_ = start;
        std::ostringstream msg;
        msg << "variable index out of range: " << name << " with nvars = " << nvars_;
        fail(msg.str());
      }
      return make_var(index);
    }

    Kind fn;
    if (name == "sin") fn = Kind::fn_sin;
    else if (name == "cos") fn = Kind::fn_cos;
    else if (name == "exp") fn = Kind::fn_exp;
    else if (name == "sqrt") fn = Kind::fn_sqrt;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    NodePtr arg = parse_expr();
    if (!eat(')')) fail("expected ')'");
    return make_fn(fn, std::move(arg));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int nvars_;
};

}  // namespace
}  // namespace ast

using ast::Kind;
using ast::NodePtr;

ScalarField ScalarField::parse(std::string_view text, int nvars) {
  if (nvars < 0) throw InvalidParameters("parse: nvars must be non-negative");
  if (text.empty()) throw ParseError("parse error at offset 0: empty input");
  return ScalarField(ast::Parser(text, nvars).run(), nvars);
}

ScalarField ScalarField::constant(double value, int nvars) {
  return ScalarField(ast::make_const(value), nvars);
}

ScalarField ScalarField::variable(int index, int nvars) {
  if (index < 1 || index > nvars) throw InvalidParameters("variable index out of range");
  return ScalarField(ast::make_var(index), nvars);
}

ScalarField ScalarField::wrap(NodePtr node, int nvars) {
  return ScalarField(std::move(node), nvars);
}

double ScalarField::eval(const Vector& point) const {
  if (point.size() != nvars_)
    throw ShapeMismatch("eval: point length does not match the variable count");
  const double value = ast::eval_node(*root_, point);
  if (!std::isfinite(value)) throw EvalDomainError("eval: non-finite result");
  return value;
}

ScalarField ScalarField::differentiate(int index) const {
  if (index < 1 || index > nvars_) throw InvalidParameters("differentiate: index out of range");
  return ScalarField(ast::diff_node(root_, index), nvars_);
}

std::string ScalarField::to_string() const {
  std::ostringstream out;
  ast::print_node(root_, out, 0);
  return out.str();
}

ScalarField ScalarField::shift(int offset, int new_nvars) const {
  std::vector<NodePtr> replacements(static_cast<std::size_t>(nvars_));
  for (int i = 1; i <= nvars_; ++i) {
    if (i + offset < 1 || i + offset > new_nvars)
      throw InvalidParameters("shift: target index out of range");
    replacements[static_cast<std::size_t>(i - 1)] = ast::make_var(i + offset);
  }
  return ScalarField(ast::substitute(root_, replacements), new_nvars);
}

ScalarField ScalarField::with_nvars(int new_nvars) const {
  if (new_nvars < ast::max_variable(root_))
    throw InvalidParameters("with_nvars: expression uses higher variable indices");
  return ScalarField(root_, new_nvars);
}

namespace {

int joint_nvars(const ScalarField& a, const ScalarField& b) {
  if (a.nvars() != b.nvars())
    throw ShapeMismatch("field arithmetic: operands have different variable counts");
  return a.nvars();
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField::wrap(ast::make_add(a.root(), b.root()), joint_nvars(a, b));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField::wrap(ast::make_sub(a.root(), b.root()), joint_nvars(a, b));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField::wrap(ast::make_mul(a.root(), b.root()), joint_nvars(a, b));
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField::wrap(ast::make_div(a.root(), b.root()), joint_nvars(a, b));
}
ScalarField operator-(const ScalarField& a) {
  return ScalarField::wrap(ast::make_neg(a.root()), a.nvars());
}
ScalarField operator*(double c, const ScalarField& a) {
  return ScalarField::wrap(ast::make_mul(ast::make_const(c), a.root()), a.nvars());
}
ScalarField operator+(const ScalarField& a, double c) {
  return ScalarField::wrap(ast::make_add(a.root(), ast::make_const(c)), a.nvars());
}

ScalarField pow(const ScalarField& a, int exponent) {
  return ScalarField::wrap(ast::make_pow(a.root(), exponent), a.nvars());
}
ScalarField sin(const ScalarField& a) {
  return ScalarField::wrap(ast::make_fn(Kind::fn_sin, a.root()), a.nvars());
}
ScalarField cos(const ScalarField& a) {
  return ScalarField::wrap(ast::make_fn(Kind::fn_cos, a.root()), a.nvars());
}
ScalarField exp(const ScalarField& a) {
  return ScalarField::wrap(ast::make_fn(Kind::fn_exp, a.root()), a.nvars());
}
ScalarField sqrt(const ScalarField& a) {
  return ScalarField::wrap(ast::make_fn(Kind::fn_sqrt, a.root()), a.nvars());
}

bool same_structure(const ScalarField& a, const ScalarField& b) {
  return a.nvars() == b.nvars() && ast::equal_nodes(a.root(), b.root());
}

Vector grad(const ScalarField& f, const Vector& point) {
  Vector g(f.nvars());
  for (int i = 1; i <= f.nvars(); ++i) g(i - 1) = f.differentiate(i).eval(point);
  return g;
}

std::vector<ScalarField> gradient_fields(const ScalarField& f) {
  std::vector<ScalarField> parts;
  parts.reserve(static_cast<std::size_t>(f.nvars()));
  for (int i = 1; i <= f.nvars(); ++i) parts.push_back(f.differentiate(i));
  return parts;
}

Matrix hessian(const ScalarField& f, const Vector& point) {
  const int n = f.nvars();
  Matrix h(n, n);
  for (int i = 1; i <= n; ++i) {
    const ScalarField di = f.differentiate(i);
    for (int j = 1; j <= n; ++j) h(i - 1, j - 1) = di.differentiate(j).eval(point);
  }
  return h;
}

Vector fd_grad(const ScalarField& f, const Vector& point, double h) {
  const int n = f.nvars();
  if (point.size() != n) throw ShapeMismatch("fd_grad: point length mismatch");
  Vector g(n);
  Vector probe = point;
  for (int i = 0; i < n; ++i) {
    const double step = h * (1.0 + std::abs(point(i)));
    probe(i) = point(i) + step;
    const double above = f.eval(probe);
    probe(i) = point(i) - step;
    const double below = f.eval(probe);
    probe(i) = point(i);
    g(i) = (above - below) / (2.0 * step);
  }
  return g;
}

ScalarField compose_linear(const ScalarField& f, const Matrix& a) {
  const int n = f.nvars();
  if (a.rows() != n || a.cols() != n)
    throw ShapeMismatch("compose_linear: matrix size does not match the variable count");
  std::vector<NodePtr> replacements(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    NodePtr row = ast::make_const(0.0);
    for (int j = 0; j < n; ++j)
      row = ast::make_add(std::move(row), ast::make_mul(ast::make_const(a(i, j)), ast::make_var(j + 1)));
    replacements[static_cast<std::size_t>(i)] = std::move(row);
  }
  return ScalarField::wrap(ast::substitute(f.root(), replacements), n);
}

VectorField VectorField::from_components(std::vector<ScalarField> components) {
  if (components.empty()) throw InvalidParameters("vector field: no components");
  VectorField f;
  f.nvars_ = components.front().nvars();
  for (const ScalarField& c : components)
    if (c.nvars() != f.nvars_)
      throw ShapeMismatch("vector field: components disagree on the variable count");
  f.dim_ = static_cast<int>(components.size());
  f.components_ = std::move(components);
  return f;
}

VectorField VectorField::linear(const Matrix& a) {
  const int n = static_cast<int>(a.cols());
  std::vector<ScalarField> components;
  components.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    NodePtr row = ast::make_const(0.0);
    for (int j = 0; j < n; ++j)
      row = ast::make_add(std::move(row), ast::make_mul(ast::make_const(a(i, j)), ast::make_var(j + 1)));
    components.push_back(ScalarField::wrap(std::move(row), n));
  }
  return from_components(std::move(components));
}

VectorField VectorField::identity(int n) { return linear(Matrix::Identity(n, n)); }

VectorField VectorField::numeric(int nvars, int dim, std::function<Vector(const Vector&)> fn) {
  if (nvars < 1 || dim < 1) throw InvalidParameters("vector field: bad dimensions");
  VectorField f;
  f.nvars_ = nvars;
  f.dim_ = dim;
  f.fn_ = std::move(fn);
  return f;
}

const std::vector<ScalarField>& VectorField::components() const {
  if (components_.empty())
    throw Error("vector field: no symbolic components (numeric evaluator only)");
  return components_;
}

Vector VectorField::eval(const Vector& point) const {
  if (point.size() != nvars_) throw ShapeMismatch("vector field: point length mismatch");
  if (!components_.empty()) {
    Vector out(dim_);
    for (int i = 0; i < dim_; ++i) out(i) = components_[static_cast<std::size_t>(i)].eval(point);
    return out;
  }
  Vector out = fn_(point);
  if (out.size() != dim_) throw ShapeMismatch("vector field: evaluator returned a wrong size");
  return out;
}

}  // namespace bform
