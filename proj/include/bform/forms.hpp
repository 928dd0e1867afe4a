#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "bform/numerics.hpp"

namespace bform {

/// Which argument slot of b an operation refers to.
enum class Side { left, right };

enum class StructureKind { euclidean, pseudo_euclidean, minkowski, symplectic, general };

std::string to_string(StructureKind kind);
std::string to_string(Side side);
std::optional<StructureKind> structure_kind_from_string(std::string_view name);

/// A non-degenerate bilinear form b(x,y) = x^T M y on R^n. Degenerate
/// matrices are rejected at construction so every downstream formula may
/// invert the Gram matrix freely.
class BilinearForm {
 public:
  static BilinearForm from_matrix(Matrix gram, double tol = tol::degeneracy);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }
  double tolerance() const { return tol_; }

  /// b(x, y) = x^T M y.
  double evaluate(const Vector& x, const Vector& y) const;

 private:
  BilinearForm(Matrix gram, double tol) : gram_(std::move(gram)), tol_(tol) {}

  Matrix gram_;
  double tol_;
};

/// A form together with the unique invertible operator relating it to the
/// dot product: <x,y> = b(x, rep * y). In matrix terms rep = gram^{-1}.
struct GeometricPair {
  BilinearForm form;
  Matrix rep;

  int dim() const { return form.dim(); }
};

GeometricPair geometric_pair(const BilinearForm& form);

struct StructureClass {
  StructureKind kind;
  std::optional<std::pair<int, int>> signature;  // (p, q); symmetric forms only
};

/// Symmetric forms are classified by the eigenvalue signs of the
/// symmetrized Gram matrix; skew forms are symplectic; anything else is
/// general.
StructureClass classify(const BilinearForm& form, double tol = tol::classify);

/// Canonical constructors: euclidean -> I; pseudo_euclidean(k) ->
/// diag(1..1,-1..-1) with k trailing minus signs; minkowski == k = 1;
/// symplectic -> [[0, I], [-I, 0]].
BilinearForm canonical(StructureKind kind, int n, std::optional<int> minus_count = std::nullopt);

}  // namespace bform
