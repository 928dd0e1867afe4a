#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bform/numerics.hpp"

namespace bform {

namespace ast {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace ast

/// A smooth scalar function of m variables x1..xm, held as an immutable
/// expression tree over {constants, variables, +, -, *, /, integer powers,
/// sin, cos, exp, sqrt} with exact symbolic differentiation.
///
/// Grammar accepted by parse():
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | factor
///   factor := primary ('^' integer)?
///   primary:= number | ident | func '(' expr ')' | '(' expr ')'
///   ident  := 'x' digits with 1 <= index <= nvars
///   func   in {sin, cos, exp, sqrt}
/// Whitespace is insignificant; +,-,*,/ are left-associative; '^' binds
/// tighter than unary minus.
class ScalarField {
 public:
  static ScalarField parse(std::string_view text, int nvars);
  static ScalarField constant(double value, int nvars);
  static ScalarField variable(int index, int nvars);  // 1-based

  int nvars() const { return nvars_; }

  double eval(const Vector& point) const;

  /// Exact partial derivative in variable `index` (1-based), with light
  /// simplification (0*u -> 0, 1*u -> u, u+0 -> u, constant folding).
  ScalarField differentiate(int index) const;

  std::string to_string() const;

  /// Same expression read in `new_nvars` variables with every index shifted
  /// by `offset` (block embedding for two-argument functions f(x,y)).
  ScalarField shift(int offset, int new_nvars) const;
  /// Same expression read in a larger variable list.
  ScalarField with_nvars(int new_nvars) const;

  const ast::NodePtr& root() const { return root_; }
  static ScalarField wrap(ast::NodePtr node, int nvars);

 private:
  ScalarField(ast::NodePtr root, int nvars) : root_(std::move(root)), nvars_(nvars) {}

  ast::NodePtr root_;
  int nvars_ = 0;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator+(const ScalarField& a, double c);

ScalarField pow(const ScalarField& a, int exponent);
ScalarField sin(const ScalarField& a);
ScalarField cos(const ScalarField& a);
ScalarField exp(const ScalarField& a);
ScalarField sqrt(const ScalarField& a);

/// Structural equality of the expression trees.
bool same_structure(const ScalarField& a, const ScalarField& b);

Vector grad(const ScalarField& f, const Vector& point);
std::vector<ScalarField> gradient_fields(const ScalarField& f);
Matrix hessian(const ScalarField& f, const Vector& point);

/// Central-difference gradient with per-component step h*(1+|x_i|);
/// the independent oracle for the symbolic derivative path.
Vector fd_grad(const ScalarField& f, const Vector& point, double h = tol::fd_step);

/// x -> f(A x) as a new expression (each variable replaced by a linear
/// combination subtree).
ScalarField compose_linear(const ScalarField& f, const Matrix& a);

/// A map R^m -> R^n: either a tuple of scalar expressions or an opaque
/// numeric evaluator (used where a closed symbolic form is not available).
class VectorField {
 public:
  static VectorField from_components(std::vector<ScalarField> components);
  static VectorField linear(const Matrix& a);  // x -> A x, built symbolically
  static VectorField identity(int n);
  static VectorField numeric(int nvars, int dim, std::function<Vector(const Vector&)> fn);

  bool symbolic() const { return !components_.empty() || dim_ == 0; }
  int nvars() const { return nvars_; }
  int dim() const { return dim_; }

  /// Component expressions; throws Error for numeric-only fields.
  const std::vector<ScalarField>& components() const;

  Vector eval(const Vector& point) const;

 private:
  VectorField() = default;

  std::vector<ScalarField> components_;
  std::function<Vector(const Vector&)> fn_;
  int nvars_ = 0;
  int dim_ = 0;
};

}  // namespace bform
