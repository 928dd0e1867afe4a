#pragma once

#include <vector>

#include "bform/forms.hpp"
#include "bform/report.hpp"

namespace bform {

/// A linear subspace of R^n stored as an orthonormal basis matrix (n x k,
/// k may be 0). Orthonormality is in the Euclidean sense regardless of the
/// ambient form; b-orthogonality is something we compute, not the storage
/// convention.
class Subspace {
 public:
  static Subspace zero(int ambient_dim);
  static Subspace full(int ambient_dim);
  static Subspace from_vectors(const std::vector<Vector>& vectors, int ambient_dim,
                               double tol = tol::rank);
  /// Span of the columns of a matrix.
  static Subspace from_columns(const Matrix& columns, double tol = tol::rank);
  /// Wrap a matrix that is already orthonormal (basis from a factorization).
  static Subspace from_orthonormal(Matrix basis);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  Matrix projector() const { return basis_ * basis_.transpose(); }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

struct SubspaceComparison {
  bool equal = false;
  double distance = 0.0;  // Frobenius distance between orthogonal projectors
};

SubspaceComparison subspace_equal(const Subspace& v, const Subspace& w,
                                  double tol = tol::projector);

/// b-orthogonal complement. left: {w : b(w,v)=0 for all v in V}; right:
/// {w : b(v,w)=0}. Always of dimension n - dim V for a non-degenerate form.
Subspace perp(const BilinearForm& form, const Subspace& v, Side side, double tol = tol::rank);

Subspace kernel(const Matrix& op, double tol = tol::rank);
Subspace image(const Matrix& op, double tol = tol::rank);

/// Kernel/image duality for both adjoints: ten subspace equalities plus the
/// four double-complement laws applied to Im(op) and Ker(op).
IdentityReport check_kernel_image_theorem(const GeometricPair& pair, const Matrix& op,
                                          double tol = tol::projector);

}  // namespace bform
